#include "czlab/schulz.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "czlab/errors.hpp"

namespace czlab {

Rational Rational::make(long long n, long long d) {
  if (d == 0) throw InputError("Rational: zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  const long long g = std::gcd(n < 0 ? -n : n, d);
  return g == 0 ? Rational{0, 1} : Rational{n / g, d / g};
}

Rational Rational::operator+(const Rational& o) const {
  const long long l = std::lcm(den, o.den);
  return make(num * (l / den) + o.num * (l / o.den), l);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const {
  return num * o.den <=> o.num * den;
}

Rational SchulzForm::grading(const Exponent& e) const {
  Rational g{0, 1};
  for (int a : pure_axes) g = g + Rational::make(e[a], ell0);
  for (std::size_t k = 0; k < flat_axes.size(); ++k) g = g + Rational::make(e[flat_axes[k]], m[k]);
  return g;
}

SchulzForm schulz_decompose(const MultiPoly& psi, const FlatnessLadder& ladder) {
  if (ladder.dim != psi.dim()) throw InputError("schulz_decompose: ladder does not match ψ");
  SchulzForm F;
  F.dim = psi.dim();
  F.ell0 = ladder.ell0;
  F.pure = MultiPoly(F.dim);
  F.P1 = MultiPoly(F.dim);
  F.R = MultiPoly(F.dim);
  for (int i = 0; i < F.dim; ++i) {
    if (ladder.axis_order[i] == F.ell0) {
      F.pure_axes.push_back(i);
    } else {
      F.flat_axes.push_back(i);
      F.m.push_back(ladder.axis_order[i]);
    }
  }
  F.r = static_cast<int>(F.pure_axes.size());
  F.coeff_pure.assign(F.r, 0.0);
  F.coeff_flat.assign(F.flat_axes.size(), 0.0);

  const Rational one{1, 1};
  for (const auto& [e, c] : psi.terms()) {
    int nz = 0, axis = -1;
    for (int i = 0; i < F.dim; ++i)
      if (e[i] > 0) {
        ++nz;
        axis = i;
      }
    const Rational g = F.grading(e);
    F.gradings.push_back({e, g});
    if (nz == 1 && e[axis] == ladder.axis_order[axis]) {
      if (!(c > 0.0))
        throw ConvexityError("schulz_decompose: pure power along axis " + std::to_string(axis) +
                             " has nonpositive coefficient");
      F.pure.add_term(e, c);
      for (int k = 0; k < F.r; ++k)
        if (F.pure_axes[k] == axis) F.coeff_pure[k] = c;
      for (std::size_t k = 0; k < F.flat_axes.size(); ++k)
        if (F.flat_axes[k] == axis) F.coeff_flat[k] = c;
      continue;
    }
    if (g < one) {
      throw NormalFormError("schulz_decompose: monomial with grading " + std::to_string(g.num) + "/" +
                            std::to_string(g.den) + " < 1");
    }
    if (g == one) {
      F.P1.add_term(e, c);
    } else {
      F.R.add_term(e, c);
    }
  }

  F.H = F.P().restrict_zero(F.flat_axes).homogeneous_part(F.ell0);
  // H must be positive on the unit sphere of the pure subspace.
  auto Hdir = [&](const std::vector<double>& u) {
    std::vector<double> x(F.dim, 0.0);
    for (int k = 0; k < F.r; ++k) x[F.pure_axes[k]] = u[k];
    return F.H.eval(x);
  };
  double hmin = INFINITY;
  if (F.r == 1) {
    hmin = std::min(Hdir({1.0}), Hdir({-1.0}));
  } else if (F.r == 2) {
    for (int i = 0; i < 4096; ++i) {
      const double a = 2.0 * std::numbers::pi * i / 4096.0;
      hmin = std::min(hmin, Hdir({std::cos(a), std::sin(a)}));
    }
  } else {
    for (int i = 0; i < 64; ++i)
      for (int j = 0; j < 128; ++j) {
        const double th = std::numbers::pi * (i + 0.5) / 64.0, ph = 2.0 * std::numbers::pi * j / 128.0;
        hmin = std::min(hmin, Hdir({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)}));
      }
  }
  if (!(hmin > 0.0)) throw NormalFormError("schulz_decompose: homogeneous part H is not positive off the origin");
  return F;
}

std::vector<int> lemma_alpha(const SchulzForm& F) {
  if (F.r != 1) throw UnsupportedConfigError("lemma_alpha: requires exactly one pure variable");
  const int y = F.pure_axes[0];
  std::vector<int> alpha(F.flat_axes.size(), 0);
  for (std::size_t k = 0; k < F.flat_axes.size(); ++k) {
    const int xj = F.flat_axes[k];
    int best = F.m[k];
    for (const auto& [e, g] : F.gradings) {
      if (!(g == Rational{1, 1}) || e[xj] == 0) continue;
      bool only = true;
      for (int i = 0; i < F.dim; ++i)
        if (i != xj && i != y && e[i] > 0) only = false;
      if (only) best = std::min(best, e[xj]);
    }
    alpha[k] = best;
  }
  return alpha;
}

nlohmann::json SchulzForm::to_json() const {
  nlohmann::json gr = nlohmann::json::array();
  for (const auto& [e, g] : gradings) gr.push_back({{"exp", e}, {"grading", g.to_json()}});
  return {{"dim", dim},           {"ell0", ell0},         {"r", r},
          {"pure_axes", pure_axes}, {"flat_axes", flat_axes}, {"m", m},
          {"coeff_pure", coeff_pure}, {"coeff_flat", coeff_flat}, {"pure", pure.to_json()},
          {"P1", P1.to_json()},     {"R", R.to_json()},     {"H", H.to_json()},
          {"gradings", gr}};
}

}  // namespace czlab
