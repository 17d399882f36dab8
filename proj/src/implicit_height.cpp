#include "czlab/implicit_height.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "czlab/errors.hpp"
#include "czlab/roots.hpp"

namespace czlab {

namespace {

void require_codim_one(const SchulzForm& form) {
  if (form.r != 1) throw UnsupportedConfigError("implicit height requires codim(E_ℓ₀) = 1 (one pure variable)");
}

std::string point_str(const std::vector<double>& x, double lambda) {
  std::string s = "x = (";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + std::to_string(x[i]);
  return s + "), λ = " + std::to_string(lambda);
}

double binom(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double a = std::log(xs[i]), b = std::log(ys[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace

double lemma_sigma(const SchulzForm& form) {
  if (form.m.empty()) throw UnsupportedConfigError("lemma_sigma: no flat variables");
  const int m = *std::min_element(form.m.begin(), form.m.end());
  return 0.5 * (1.0 - static_cast<double>(form.ell0) / m);
}

double implicit_height(const SurfaceSpec& spec, const SchulzForm& form, const std::vector<double>& x, double lambda,
                       double rel_tol) {
  require_codim_one(form);
  if (x.size() != form.flat_axes.size()) throw InputError("implicit_height: x has the wrong length");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw InputError("implicit_height: λ must lie in (0, 1]");
  const int d = spec.dim();
  const int ya = form.pure_axes[0];
  std::vector<double> t(d, 0.0);
  for (std::size_t k = 0; k < x.size(); ++k) t[form.flat_axes[k]] = x[k];
  const double target = std::pow(lambda, form.ell0);
  auto f = [&](double y) {
    std::vector<double> p = t;
    p[ya] = y;
    return spec.eval(p) / target - 1.0;
  };
  auto df = [&](double y) {
    std::vector<double> p = t, g(d);
    p[ya] = y;
    spec.psi->gradient(p, g);
    return g[ya] / target;
  };
  if (f(0.0) > 0.0)
    throw GeometryError("implicit_height: ψ(0, x) already exceeds λ^ℓ₀ at " + point_str(x, lambda));
  double hi = 2.0 * std::pow(form.coeff_pure[0], -1.0 / form.ell0) * lambda;
  int grow = 0;
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (++grow > 60) throw GeometryError("implicit_height: no bracket found at " + point_str(x, lambda));
  }
  try {
    return find_root_monotone(f, df, 0.0, hi, rel_tol);
  } catch (const BracketError&) {
    throw GeometryError("implicit_height: bracket failure at " + point_str(x, lambda));
  }
}

double implicit_height_derivative(const SurfaceSpec& spec, const SchulzForm& form, const std::vector<double>& x,
                                  double lambda, const std::vector<int>& beta, const std::vector<double>& steps) {
  const std::size_t n = x.size();
  if (beta.size() != n || steps.size() != n) throw InputError("implicit_height_derivative: size mismatch");
  // Tensor product of order-β_j central stencils: Σ_i (-1)^i C(k, i) f(x + (k/2 - i) h).
  std::vector<int> idx(n, 0);
  double acc = 0.0, scale = 1.0, ymax = 0.0;
  for (std::size_t j = 0; j < n; ++j) scale *= std::pow(steps[j], beta[j]);
  while (true) {
    std::vector<double> p = x;
    double w = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
      p[j] += (0.5 * beta[j] - idx[j]) * steps[j];
      w *= ((idx[j] % 2) ? -1.0 : 1.0) * binom(beta[j], idx[j]);
    }
    const double y = implicit_height(spec, form, p, lambda, 1e-15);
    ymax = std::max(ymax, std::abs(y));
    acc += w * y;
    std::size_t k = 0;
    while (k < n && ++idx[k] > beta[k]) idx[k++] = 0;
    if (k == n) break;
  }
  if (scale <= 1e3 * std::numeric_limits<double>::epsilon() * std::max(ymax, 1e-300))
    throw NumericError("implicit_height_derivative: finite-difference step is at the rounding floor");
  return acc / scale;
}

bool Lemma1Report::all_consistent() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const Lemma1Clause& c) { return c.consistent; });
}

nlohmann::json Lemma1Report::to_json() const {
  nlohmann::json cl = nlohmann::json::array();
  for (const auto& c : clauses)
    cl.push_back({{"clause", c.clause},
                  {"beta", c.beta},
                  {"predicted_exponent", c.predicted_exponent},
                  {"lambdas", c.lambdas},
                  {"measured", c.measured},
                  {"ratio", c.ratio},
                  {"slope", c.slope},
                  {"consistent", c.consistent}});
  return {{"alpha", alpha}, {"sigma", sigma}, {"clauses", cl}, {"all_consistent", all_consistent()}};
}

Lemma1Report lemma1_estimates(const SurfaceSpec& spec, const SchulzForm& form, const std::vector<double>& lambda_grid,
                              const std::vector<std::vector<double>>& x_samples) {
  require_codim_one(form);
  if (lambda_grid.size() < 2) throw InputError("lemma1_estimates: need at least two λ values");
  Lemma1Report rep;
  rep.alpha = lemma_alpha(form);
  rep.sigma = lemma_sigma(form);
  const std::size_t n = form.flat_axes.size();
  const int mmin = *std::min_element(form.m.begin(), form.m.end());
  const double region_exp = static_cast<double>(form.ell0) / mmin + rep.sigma;

  auto steps_for = [&](double lambda) {
    std::vector<double> h(n);
    for (std::size_t j = 0; j < n; ++j) h[j] = std::pow(lambda, static_cast<double>(form.ell0) / form.m[j]) / 64.0;
    return h;
  };
  auto predicted = [&](const std::vector<int>& beta) {
    double e = 1.0;
    for (std::size_t j = 0; j < n; ++j) e -= static_cast<double>(form.ell0) * beta[j] / form.m[j];
    return e;
  };
  auto measure_max = [&](const std::vector<int>& beta, double lambda, bool origin_only) {
    const double rad = std::pow(lambda, region_exp);
    double best = 0.0;
    const auto h = steps_for(lambda);
    for (const auto& s : x_samples) {
      if (s.size() != n) throw InputError("lemma1_estimates: x sample has the wrong length");
      double n2 = 0.0;
      for (double v : s) n2 += v * v;
      if (origin_only && n2 > 0.0) continue;
      std::vector<double> x(n);
      for (std::size_t j = 0; j < n; ++j) x[j] = s[j] * rad;
      best = std::max(best, std::abs(implicit_height_derivative(spec, form, x, lambda, beta, h)));
    }
    return best;
  };
  auto add_clause = [&](const std::string& name, const std::vector<int>& beta, bool origin_only) {
    Lemma1Clause c;
    c.clause = name;
    c.beta = beta;
    c.predicted_exponent = predicted(beta);
    for (double lam : lambda_grid) {
      const double v = measure_max(beta, lam, origin_only);
      c.lambdas.push_back(lam);
      c.measured.push_back(v);
      c.ratio.push_back(v / std::pow(lam, c.predicted_exponent));
    }
    const double rmax = *std::max_element(c.ratio.begin(), c.ratio.end());
    const double rmin = *std::min_element(c.ratio.begin(), c.ratio.end());
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < c.lambdas.size(); ++i)
      if (c.measured[i] > 0.0) {
        xs.push_back(c.lambdas[i]);
        ys.push_back(c.measured[i]);
      }
    c.slope = xs.size() >= 2 ? log_slope(xs, ys) : 0.0;
    int order = 0;
    for (int b : beta) order += b;
    if (name == "2") {
      c.consistent = rmin > 0.0 && rmax / rmin < 4.0;
    } else if (name == "4") {
      // Either a power law with exponent > -|β|, or negligible.
      const double head = std::max(c.ratio[0], c.ratio[1]);
      const bool negligible = rmax <= 1e-8;
      c.consistent = negligible || (c.slope > -static_cast<double>(order) && rmax <= 4.0 * std::max(head, 1e-300));
    } else {
      const double head = std::max(c.ratio[0], c.ratio[1]);
      c.consistent = rmax <= 4.0 * head + 1e-9;
    }
    rep.clauses.push_back(c);
  };

  for (std::size_t j = 0; j < n; ++j) {
    for (int k = 1; k < rep.alpha[j]; ++k) {
      std::vector<int> beta(n, 0);
      beta[j] = k;
      add_clause("1", beta, false);
    }
    std::vector<int> beta(n, 0);
    beta[j] = rep.alpha[j];
    add_clause("2", beta, false);
  }
  if (n >= 2) {
    std::vector<int> beta(n, 0);
    while (true) {
      int nonzero = 0;
      for (int b : beta) nonzero += b > 0;
      if (nonzero >= 2) add_clause("3", beta, false);
      std::size_t k = 0;
      while (k < n && ++beta[k] > rep.alpha[k]) beta[k++] = 0;
      if (k == n) break;
    }
  }
  {
    std::vector<int> beta(n, 0);
    while (true) {
      int order = 0;
      for (int b : beta) order += b;
      if (order > 0) add_clause("4", beta, true);
      std::size_t k = 0;
      while (k < n && ++beta[k] > rep.alpha[k] - 1) beta[k++] = 0;
      if (k == n) break;
    }
  }
  return rep;
}

}  // namespace czlab
