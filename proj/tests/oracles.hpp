#pragma once

// Brute-force reference quadratures shared by the multiplier tests and the acceptance binary.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "czlab/mu_k.hpp"
#include "czlab/multiplier.hpp"
#include "czlab/reduced.hpp"

namespace czlab::oracle {

inline constexpr double kPi = std::numbers::pi;

inline std::complex<double> phase_factor(const MultiplierQuery& q, std::span<const double> t) {
  const double psi = q.surface.eval(t);
  double ph = q.gamma * q.surface.phi(psi);
  for (std::size_t i = 0; i < q.xi.size(); ++i) ph += q.xi[i] * t[i];
  const double b = q.modulation ? (*q.modulation)(psi) : 1.0;
  return b * std::polar(1.0, ph);
}

// Midpoint rule in (log r, angle) over ε <= |t| <= 1 in the plane; K(t) dt = Ω(θ) d(log r) dθ.
inline std::complex<double> multiplier_dim2(const MultiplierQuery& q, int nu = 4096, int nth = 512) {
  const double u0 = std::log(q.eps), du = -u0 / nu, dth = 2.0 * kPi / nth;
  std::vector<double> om(nth), cs(nth), sn(nth);
  for (int j = 0; j < nth; ++j) {
    cs[j] = std::cos((j + 0.5) * dth);
    sn[j] = std::sin((j + 0.5) * dth);
    const double th[2] = {cs[j], sn[j]};
    om[j] = q.kernel.omega(th);
  }
  std::complex<double> s = 0.0;
  for (int i = 0; i < nu; ++i) {
    const double r = std::exp(u0 + (i + 0.5) * du);
    std::complex<double> row = 0.0;
    for (int j = 0; j < nth; ++j) {
      const double t[2] = {r * cs[j], r * sn[j]};
      row += om[j] * phase_factor(q, t);
    }
    s += row;
  }
  return s * du * dth;
}

// Midpoint rule on an n³ grid in (log r, cos polar, azimuth) over ε <= |t| <= 1 in R³.
inline std::complex<double> multiplier_dim3(const MultiplierQuery& q, int n = 256) {
  const double u0 = std::log(q.eps), du = -u0 / n, dm = 2.0 / n, da = 2.0 * kPi / n;
  std::complex<double> s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = std::exp(u0 + (i + 0.5) * du);
    for (int j = 0; j < n; ++j) {
      const double mu = -1.0 + (j + 0.5) * dm, st = std::sqrt(1.0 - mu * mu);
      for (int k = 0; k < n; ++k) {
        const double a = (k + 0.5) * da;
        const double th[3] = {st * std::cos(a), st * std::sin(a), mu};
        const double t[3] = {r * th[0], r * th[1], r * th[2]};
        s += q.kernel.omega(th) * phase_factor(q, t);
      }
    }
  }
  return s * du * dm * da;
}

// μ̂_k for a planar surface with principal part P = a x² + c y², whose gauge is √P: midpoint in
// (s = 2^k‖t‖, angle), normalized by the same rule's mass.
inline std::complex<double> mu_k_dim2(const SurfaceSpec& surf, double a, double c, int k, const std::vector<double>& xi,
                                      double gamma, int ns = 2000, int nth = 1024) {
  const double sc = std::ldexp(1.0, -k), ds = 1.0 / ns, dth = 2.0 * kPi / nth;
  std::complex<double> s = 0.0;
  double mass = 0.0;
  for (int j = 0; j < nth; ++j) {
    const double th = (j + 0.5) * dth, ct = std::cos(th), st = std::sin(th);
    const double rho = 1.0 / std::sqrt(a * ct * ct + c * st * st);
    for (int i = 0; i < ns; ++i) {
      const double sv = 1.0 + (i + 0.5) * ds, w = mu_chi(sv) * sv * rho * rho;
      if (w == 0.0) continue;
      const double t[2] = {sc * sv * rho * ct, sc * sv * rho * st};
      const double ph = xi[0] * t[0] + xi[1] * t[1] + gamma * surf.phi(surf.eval(t));
      s += w * std::polar(1.0, ph);
      mass += w;
    }
  }
  return s / mass;
}

struct MuKInstance {
  SurfaceSpec surface;
  double a = 1.0, c = 1.0;
  int k = 3;
  std::vector<double> xi;
  double gamma = 0.0;
};

// a x² + c y² (+ x⁴ or x²y²) with φ̄ from a small registry.
inline MuKInstance mu_k_instance(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  MuKInstance m;
  m.a = 0.5 + 1.5 * u(rng);
  m.c = 0.5 + 1.5 * u(rng);
  nlohmann::json terms = {{{"exp", {2, 0}}, {"coef", m.a}}, {{"exp", {0, 2}}, {"coef", m.c}}};
  const unsigned extra = rng() % 3;
  if (extra == 1) terms.push_back({{"exp", {4, 0}}, {"coef", 1.0}});
  if (extra == 2) terms.push_back({{"exp", {2, 2}}, {"coef", 0.5}});
  static const std::vector<std::string> phis = {"power-2", "affine-plus-square", "power-3"};
  m.surface = make_surface({{"poly", {{"dim", 2}, {"terms", terms}}}}, nullptr, phis[rng() % phis.size()]);
  m.k = 2 + static_cast<int>(rng() % 4);
  const double scale = std::ldexp(1.0, m.k);
  m.xi = {scale * (16.0 * u(rng) - 8.0), scale * (16.0 * u(rng) - 8.0)};
  m.gamma = (40.0 * u(rng) - 20.0) / (*m.surface.phi_bar)(1.0 / scale);  // |γ| <= 20·2^15 < 1e6
  return m;
}

// Seeded planar multiplier instances of moderate frequency.
inline MultiplierQuery dim2_instance(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  static const std::vector<nlohmann::json> surfaces = {
      {{"name", "paraboloid"}, {"dim", 2}},
      {{"poly", {{"dim", 2}, {"terms", {{{"exp", {2, 0}}, {"coef", 1.0}}, {{"exp", {0, 4}}, {"coef", 1.0}}}}}}},
      {{"name", "wwz-alpha"}, {"alpha", 0.5}},
      {{"name", "wwz-alpha"}, {"alpha", 1.5}}};
  static const std::vector<std::string> phis = {"identity", "power-2", "affine-plus-square"};
  static const std::vector<std::string> kernels = {"riesz-1", "riesz-2", "harmonic-22", "harmonic-20"};
  const auto& sj = surfaces[rng() % surfaces.size()];
  const auto& ph = phis[rng() % phis.size()];
  const auto& kn = kernels[rng() % kernels.size()];
  MultiplierQuery q{make_surface(sj, ph, nullptr), make_kernel({{"name", kn}, {"dim", 2}}), 20.0 * u(rng),
                    {20.0 * u(rng), 20.0 * u(rng)}, std::ldexp(1.0, -3 - static_cast<int>(rng() % 4))};
  return q;
}

// Midpoint rule in log λ: the sine form over [λ_min, cap] (the integrand is O(λ) below λ_min),
// the one-sided form over [1/η, 1].
inline std::complex<double> reduced(const ReducedIntegralSpec& s, int n = 400000, double lambda_min = 1e-14) {
  const bool sine = s.form == ReducedForm::Sine;
  const double a = sine ? std::log(lambda_min) : -std::log(s.eta);
  const double b = sine ? std::log(reduced_cap(s)) : 0.0;
  const double h = (b - a) / n;
  std::complex<double> acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double l = std::exp(a + (i + 0.5) * h);
    const double g = s.gamma * s.phi_bar(l);
    acc += sine ? std::polar(1.0, g) * std::sin(s.eta * s.q.q(l)) : std::polar(1.0, g - s.eta * s.q.q(l));
  }
  return acc * h;
}

// Seeded reduced-integral instances: alternating forms, moderate γ and η.
inline ReducedIntegralSpec reduced_instance(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  static const std::vector<std::string> phis = {"power-2", "affine-plus-square", "power-3"};
  ReducedIntegralSpec s;
  s.phi_bar = Profile::from_json(phis[rng() % phis.size()]);
  s.gamma = 60.0 * u(rng) - 30.0;
  s.eta = 2.0 + 40.0 * u(rng);
  s.form = seed % 2 ? ReducedForm::Sine : ReducedForm::OneSided;
  if (s.form == ReducedForm::Sine && rng() % 2) s.xi_cap = 1.0 + 4.0 * u(rng);
  return s;
}

}  // namespace czlab::oracle
