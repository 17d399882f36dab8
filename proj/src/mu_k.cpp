#include "czlab/mu_k.hpp"

#include <cmath>
#include <numbers>

#include "czlab/errors.hpp"
#include "czlab/ladder.hpp"
#include "czlab/multiplier.hpp"

namespace czlab {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

std::complex<double> raw_transform(const MuKMeasure& m, const std::vector<double>& xi, double gamma) {
  const int d = m.surface.dim();
  const double scale = std::ldexp(1.0, -m.k);
  const LevelSetChart& ch = m.chart;
  OscillatoryProblem p;
  p.d = d;
  p.surface = &m.surface;
  p.gamma = gamma;
  p.xi = xi;
  // s = 2^k ‖t‖ in [1, 2]; 2^{k·dim} dt = s^{dim-1} ρ^dim ds dσ.
  if (d == 2) {
    p.map = [&ch, scale](const std::array<double, 3>& c, std::array<double, 3>& t, double& w) {
      const double th[2] = {std::cos(c[1]), std::sin(c[1])};
      const double rho = gauge_radius(ch, th);
      const double R = scale * c[0] * rho;
      t = {R * th[0], R * th[1], 0.0};
      w = mu_chi(c[0]) * c[0] * rho * rho;
    };
  } else {
    p.map = [&ch, scale](const std::array<double, 3>& c, std::array<double, 3>& t, double& w) {
      const double st = std::sin(c[1]);
      const double th[3] = {st * std::cos(c[2]), st * std::sin(c[2]), std::cos(c[1])};
      const double rho = gauge_radius(ch, th);
      const double R = scale * c[0] * rho;
      t = {R * th[0], R * th[1], R * th[2]};
      w = mu_chi(c[0]) * c[0] * c[0] * rho * rho * rho * st;
    };
  }
  std::vector<Box> init;
  if (d == 2) {
    for (int a = 0; a < 4; ++a) {
      Box b;
      b.d = 2;
      b.lo = {1.0, a * kHalfPi, 0.0};
      b.hi = {2.0, (a + 1) * kHalfPi, 0.0};
      init.push_back(b);
    }
  } else {
    for (int h = 0; h < 2; ++h)
      for (int a = 0; a < 4; ++a) {
        Box b;
        b.d = 3;
        b.lo = {1.0, h * kHalfPi, a * kHalfPi};
        b.hi = {2.0, (h + 1) * kHalfPi, (a + 1) * kHalfPi};
        init.push_back(b);
      }
  }
  return oscillatory_integral(p, init, m.abs_tol, m.max_cells).value;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

}  // namespace

double mu_chi(double s) {
  if (s <= 1.0 || s >= 2.0) return 0.0;
  return std::exp(-1.0 / ((s - 1.0) * (2.0 - s)));
}

MuKMeasure make_mu_k(const SurfaceSpec& surface, int k, double tol) {
  if (k < 1) throw InputError("mu_k: k must be >= 1");
  if (!(tol > 0.0)) throw InputError("mu_k: tolerance must be positive");
  const MultiPoly* poly = surface.poly();
  if (poly == nullptr) throw UnsupportedConfigError("mu_k: ψ must be a polynomial");
  const FlatnessLadder ladder = flatness_ladder(*poly);
  if (ladder.codim != surface.dim()) throw InputError("mu_k: the surface must have E_ℓ₀ = {0}");
  if (!surface.phi_bar) throw InputError("mu_k: φ̄ is not available for this surface");
  MuKMeasure m;
  m.surface = surface;
  m.form = schulz_decompose(*poly, ladder);
  m.chart = make_chart(m.form);
  m.k = k;
  m.tol = tol;
  const std::vector<double> zero(surface.dim(), 0.0);
  m.abs_tol = tol;
  m.abs_tol = tol * raw_transform(m, zero, 0.0).real();
  m.mass = raw_transform(m, zero, 0.0).real();
  return m;
}

std::complex<double> mu_k_fourier(const MuKMeasure& m, const std::vector<double>& xi, double gamma) {
  if (static_cast<int>(xi.size()) != m.surface.dim()) throw InputError("mu_k: ξ has the wrong length");
  return raw_transform(m, xi, gamma) / m.mass;
}

double delta_norm(const SurfaceSpec& surface, double s, const std::vector<double>& xi, double gamma) {
  if (!surface.phi_bar) throw InputError("delta_norm: φ̄ is not available");
  double n2 = 0.0;
  for (double v : xi) n2 += s * s * v * v;
  const double g = (*surface.phi_bar)(s) * gamma;
  return std::sqrt(n2 + g * g);
}

nlohmann::json DecayFit::to_json() const {
  return {{"delta", delta}, {"values", values}, {"slope", slope}, {"used", used}};
}

DecayFit decay_fit(const MuKMeasure& m, const std::vector<double>& direction, DecayMode mode,
                   const std::vector<double>& magnitudes) {
  const int d = m.surface.dim();
  const double s = std::ldexp(1.0, -m.k - 1);
  DecayFit fit;
  std::vector<double> lx, ly;
  for (double mag : magnitudes) {
    std::vector<double> xi(d, 0.0);
    double gamma = 0.0;
    if (mode == DecayMode::Spatial) {
      if (static_cast<int>(direction.size()) != d) throw InputError("decay_fit: direction has the wrong length");
      double n = 0.0;
      for (double v : direction) n += v * v;
      n = std::sqrt(n);
      if (!(n > 0.0)) throw InputError("decay_fit: zero direction");
      for (int i = 0; i < d; ++i) xi[i] = mag / s * direction[i] / n;
    } else {
      const double sign = direction.empty() || direction[0] >= 0.0 ? 1.0 : -1.0;
      gamma = sign * mag / (*m.surface.phi_bar)(s);
    }
    const double dn = delta_norm(m.surface, s, xi, gamma);
    const double v = std::abs(mu_k_fourier(m, xi, gamma));
    fit.delta.push_back(dn);
    fit.values.push_back(v);
    // Values within 100x of the quadrature tolerance carry no decay information.
    if (v > 100.0 * m.tol) {
      lx.push_back(std::log(dn));
      ly.push_back(std::log(v));
    }
  }
  fit.used = static_cast<int>(lx.size());
  if (fit.used < 2) throw NumericError("decay_fit: fewer than two values above the quadrature noise floor");
  fit.slope = fit_slope(lx, ly);
  return fit;
}

nlohmann::json SmallArgumentResult::to_json() const {
  return {{"C", C}, {"delta", delta}, {"deviation", deviation}};
}

SmallArgumentResult small_argument_check(const MuKMeasure& m, const std::vector<std::vector<double>>& grid) {
  const int d = m.surface.dim();
  const double s = std::ldexp(1.0, -m.k + 3);
  const double fb = (*m.surface.phi_bar)(s);
  SmallArgumentResult res;
  for (const auto& g : grid) {
    if (static_cast<int>(g.size()) != d + 1) throw InputError("small_argument_check: grid points need dim + 1 entries");
    std::vector<double> xi(d);
    for (int i = 0; i < d; ++i) xi[i] = g[i] / s;
    const double gamma = g[d] / fb;
    const double dn = delta_norm(m.surface, s, xi, gamma);
    if (dn == 0.0) continue;
    if (dn > 1.0 + 1e-12) throw InputError("small_argument_check: grid point with |δ| > 1");
    const double dev = std::abs(mu_k_fourier(m, xi, gamma) - 1.0);
    res.delta.push_back(dn);
    res.deviation.push_back(dev);
    res.C = std::max(res.C, dev / dn);
  }
  return res;
}

std::vector<std::vector<double>> default_small_argument_grid(int dim) {
  std::vector<std::vector<double>> dirs;
  for (int i = 0; i <= dim; ++i) {
    std::vector<double> e(dim + 1, 0.0);
    e[i] = 1.0;
    dirs.push_back(e);
  }
  std::vector<double> diag(dim + 1, 1.0 / std::sqrt(dim + 1.0));
  dirs.push_back(diag);
  std::vector<std::vector<double>> grid;
  for (double mag : {0.125, 0.25, 0.5, 1.0})
    for (const auto& e : dirs) {
      std::vector<double> p(e);
      for (double& v : p) v *= mag;
      grid.push_back(p);
    }
  return grid;
}

}  // namespace czlab
