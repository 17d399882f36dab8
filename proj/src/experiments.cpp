#include "czlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "czlab/errors.hpp"
#include "czlab/ladder.hpp"

namespace czlab {

namespace {

constexpr double kQuarterPi = 0.25 * std::numbers::pi;

void fill_point(CounterexampleSequence& s, const Profile& pb, int j, double ratio) {
  const double l = std::ldexp(1.0, -j);
  const double d = l * pb.deriv(l) - pb(l);
  const double g = kQuarterPi / d;
  const double eta = g * pb.deriv(l);
  const double inv_xi = std::min({l, std::pow(eta, -s.b), std::pow(eta, -1.0 / (1.0 + s.eps_prime))});
  s.j.push_back(j);
  s.lambda.push_back(l);
  s.ratio.push_back(ratio);
  s.gamma.push_back(g);
  s.eta.push_back(eta);
  s.xi.push_back(1.0 / inv_xi);
  s.predicted.push_back(std::log(l * eta));
}

double convexity_ratio(const Profile& pb, int j) {
  const double l = std::ldexp(1.0, -j);
  const double d = l * pb.deriv(l) - pb(l);
  if (!(d > 0.0))
    throw InvariantError("necessity sequence: λφ̄'(λ) - φ̄(λ) <= 0 at λ = 2^-" + std::to_string(j) +
                         " (φ̄ is not strictly convex there)");
  return l * pb.deriv(l) / d;
}

}  // namespace

nlohmann::json DoublingResult::to_json() const {
  return {{"holds", holds}, {"worst_ratio", worst_ratio}, {"witness", witness}};
}

DoublingResult doubling_check(const Profile& phi_bar, double C, const std::vector<double>& lambda_grid) {
  if (!(C >= 1.0)) throw InputError("doubling_check: C must be >= 1");
  if (lambda_grid.empty()) throw InputError("doubling_check: empty grid");
  DoublingResult r;
  r.worst_ratio = std::numeric_limits<double>::infinity();
  r.witness = lambda_grid.front();
  for (double l : lambda_grid) {
    if (!(l > 0.0 && l <= 1.0 / C * (1.0 + 1e-12))) throw InputError("doubling_check: grid must lie in (0, 1/C]");
    const double num = phi_bar.deriv(C * l), den = phi_bar.deriv(l);
    const double ratio = den == 0.0 ? std::numeric_limits<double>::infinity() : num / den;
    if (ratio < r.worst_ratio) {
      r.worst_ratio = ratio;
      r.witness = l;
    }
  }
  r.holds = r.worst_ratio >= 2.0 - 1e-9;
  return r;
}

std::vector<double> doubling_grid(double C) {
  std::vector<double> g;
  for (int m = 1; m <= 60; ++m) {
    const double l = std::ldexp(1.0, -m);
    if (l <= 1.0 / C) g.push_back(l);
  }
  return g;
}

double doubling_constant(const Profile& phi_bar) {
  for (double C = 2.0; C <= 1024.0; C *= 2.0)
    if (doubling_check(phi_bar, C, doubling_grid(C)).holds) return C;
  return 0.0;
}

nlohmann::json CounterexampleSequence::to_json() const {
  return {{"j", j},         {"lambda", lambda}, {"ratio", ratio},         {"gamma", gamma}, {"eta", eta},
          {"xi", xi},       {"b", b},           {"eps_prime", eps_prime}, {"predicted_log", predicted}};
}

CounterexampleSequence necessity_sequence(const Profile& phi_bar, int j_max, double b, double eps_prime, int j_min) {
  if (j_min < 1 || j_max < j_min) throw InputError("necessity_sequence: need 1 <= j_min <= j_max");
  if (!(b > 0.0 && b < 1.0) || !(eps_prime > 0.0)) throw InputError("necessity_sequence: need 0 < b < 1, ε' > 0");
  if (const double C = doubling_constant(phi_bar); C > 0.0)
    throw MisuseError("necessity_sequence: φ̄ satisfies the doubling condition with C = " + std::to_string(C));
  CounterexampleSequence s;
  s.b = b;
  s.eps_prime = eps_prime;
  double best = -1.0;
  for (int j = 1; j <= j_max; ++j) {
    const double r = convexity_ratio(phi_bar, j);
    if (r > best) {
      best = r;
      if (j >= j_min) fill_point(s, phi_bar, j, r);
    }
  }
  if (s.j.size() < 2) throw MisuseError("necessity_sequence: the ratio does not grow along dyadic λ");
  return s;
}

CounterexampleSequence counterexample_grid(const Profile& phi_bar, int j_min, int j_max, double b, double eps_prime) {
  if (j_min < 1 || j_max < j_min) throw InputError("counterexample_grid: need 1 <= j_min <= j_max");
  CounterexampleSequence s;
  s.b = b;
  s.eps_prime = eps_prime;
  for (int j = j_min; j <= j_max; ++j) fill_point(s, phi_bar, j, convexity_ratio(phi_bar, j));
  return s;
}

nlohmann::json GrowthFit::to_json() const {
  return {{"values", values}, {"a", a}, {"c", c}, {"increasing_beyond_6", increasing_beyond_6}};
}

GrowthFit necessity_growth(const CounterexampleSequence& seq, const ReducedIntegralSpec& tmpl) {
  GrowthFit g;
  const std::size_t n = seq.j.size();
  if (n < 2) throw InputError("necessity_growth: need at least two sequence points");
  for (std::size_t i = 0; i < n; ++i) {
    ReducedIntegralSpec s = tmpl;
    s.gamma = seq.gamma[i];
    s.eta = seq.eta[i];
    s.xi_cap = seq.xi[i];
    s.b = seq.b;
    g.values.push_back(std::abs(reduced_integral(s)));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = seq.predicted[i], y = g.values[i];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  g.c = den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
  g.a = (sy - g.c * sx) / n;
  g.increasing_beyond_6 = true;
  bool any = false;
  for (std::size_t i = 1; i < n; ++i)
    if (seq.j[i - 1] >= 6) {
      any = true;
      if (!(g.values[i] > g.values[i - 1])) g.increasing_beyond_6 = false;
    }
  if (!any) g.increasing_beyond_6 = false;
  return g;
}

nlohmann::json PhaseBoundResult::to_json() const {
  return {{"holds", holds}, {"min", min_value}, {"max", max_value}};
}

PhaseBoundResult phase_bound_check(const Profile& phi_bar, const CounterexampleSequence& seq, int samples) {
  PhaseBoundResult r;
  r.min_value = std::numeric_limits<double>::infinity();
  r.max_value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < seq.j.size(); ++i) {
    for (int k = 1; k <= samples; ++k) {
      const double l = seq.lambda[i] * k / samples;
      const double v = seq.eta[i] * l - seq.gamma[i] * phi_bar(l);
      r.min_value = std::min(r.min_value, v);
      r.max_value = std::max(r.max_value, v);
    }
  }
  // Rounding in γφ̄ at the largest γ.
  r.holds = r.min_value >= -1e-9 && r.max_value <= kQuarterPi * (1.0 + 1e-9);
  return r;
}

nlohmann::json DichotomyReport::to_json() const {
  return {{"verdict", verdict},
          {"branch", branch},
          {"hemisphere", hemisphere},
          {"doubling_C", doubling_C},
          {"sequence", sequence.to_json()},
          {"growth", growth.to_json()},
          {"sup_value", sup_value},
          {"first_value", first_value}};
}

DichotomyReport run_dichotomy(const SurfaceSpec& surface, const CZKernel& kernel, int j_min, int j_max, double b,
                              double eps_prime) {
  const MultiPoly* poly = surface.poly();
  if (poly == nullptr) throw UnsupportedConfigError("dichotomy: ψ must be a polynomial");
  if (kernel.dim() != surface.dim()) throw InputError("dichotomy: kernel and surface dimensions differ");
  const FlatnessLadder ladder = flatness_ladder(*poly);
  if (ladder.codim != 1 || !ladder.normal_v)
    throw UnsupportedConfigError("dichotomy: requires codim(E_ℓ₀) = 1");
  if (!surface.phi_bar) throw InputError("dichotomy: φ̄ is not available");
  const Profile& pb = *surface.phi_bar;
  DichotomyReport rep;
  rep.hemisphere = hemisphere_sphere_integral(
      kernel.dim(), *ladder.normal_v, [&](std::span<const double> th) { return kernel.omega(th); }, 1e-12);
  if (std::abs(rep.hemisphere) <= 1e-8) {
    rep.verdict = "bounded";
    rep.branch = "cancellation";
    return rep;
  }
  ReducedIntegralSpec tmpl;
  tmpl.phi_bar = pb;
  tmpl.b = b;
  tmpl.form = ReducedForm::Sine;
  rep.doubling_C = doubling_constant(pb);
  if (rep.doubling_C > 0.0) {
    rep.branch = "doubling";
    rep.sequence = counterexample_grid(pb, j_min, j_max, b, eps_prime);
    rep.growth = necessity_growth(rep.sequence, tmpl);
    rep.first_value = rep.growth.values.front();
    rep.sup_value = *std::max_element(rep.growth.values.begin(), rep.growth.values.end());
    rep.verdict = rep.sup_value <= 1.2 * rep.first_value ? "bounded" : "inconclusive";
    return rep;
  }
  rep.branch = "necessity";
  rep.sequence = necessity_sequence(pb, j_max, b, eps_prime, j_min);
  rep.growth = necessity_growth(rep.sequence, tmpl);
  rep.first_value = rep.growth.values.front();
  rep.sup_value = *std::max_element(rep.growth.values.begin(), rep.growth.values.end());
  rep.verdict = rep.growth.c >= 0.1 && rep.growth.increasing_beyond_6 ? "log-growth" : "inconclusive";
  return rep;
}

}  // namespace czlab
