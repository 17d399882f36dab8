#include "czlab/cap_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "czlab/errors.hpp"
#include "czlab/parallel.hpp"
#include "czlab/quadrature.hpp"
#include "czlab/roots.hpp"

namespace czlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const std::vector<double>& gl_nodes() {
  static const std::vector<double> n = [] {
    std::vector<double> x, w;
    gauss_legendre(10, x, w);
    return x;
  }();
  return n;
}
const std::vector<double>& gl_weights() {
  static const std::vector<double> w = [] {
    std::vector<double> x, ww;
    gauss_legendre(10, x, ww);
    return ww;
  }();
  return w;
}

double wrap(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

double dot(const std::array<double, 2>& a, const std::array<double, 2>& b) { return a[0] * b[0] + a[1] * b[1]; }

}  // namespace

CurveTable::CurveTable(std::shared_ptr<const SurfaceFunction> curve, int n) : curve_(std::move(curve)), n_(n) {
  if (curve_->dim() != 2 || !curve_->is_gauge())
    throw InputError("CurveTable: the curve must be a degree-1 homogeneous gauge in dimension 2");
  pts_.resize(n_);
  cum_.assign(n_ + 1, 0.0);
  for (int i = 0; i < n_; ++i) pts_[i] = point(angle(i));
  for (int i = 0; i < n_; ++i) cum_[i + 1] = cum_[i] + arc_between(angle(i), angle(i + 1));
}

double CurveTable::angle(int i) const { return kTwoPi * i / n_; }

std::array<double, 2> CurveTable::point(double theta) const {
  const double u[2] = {std::cos(theta), std::sin(theta)};
  const double rho = 1.0 / curve_->value(u);
  return {rho * u[0], rho * u[1]};
}

double CurveTable::speed(double theta) const {
  const double c = std::cos(theta), s = std::sin(theta);
  const double u[2] = {c, s};
  double g[2];
  curve_->gradient(u, g);
  const double psi = curve_->value(u);
  const double rho = 1.0 / psi;
  const double drho = -rho * rho * (-g[0] * s + g[1] * c);
  return std::sqrt(rho * rho + drho * drho);
}

double CurveTable::arc_between(double a, double b) const {
  const auto& x = gl_nodes();
  const auto& w = gl_weights();
  double s = 0.0;
  for (std::size_t q = 0; q < x.size(); ++q) s += w[q] * speed(0.5 * (a + b) + 0.5 * (b - a) * x[q]);
  return 0.5 * (b - a) * s;
}

double CurveTable::arc_to(double theta) const {
  const int i = std::clamp(static_cast<int>(std::floor(theta / kTwoPi * n_)), 0, n_ - 1);
  return cum_[i] + arc_between(angle(i), theta);
}

std::vector<std::shared_ptr<const CurveTable>> make_curve_tables(std::shared_ptr<const SurfaceFunction> curve) {
  return {std::make_shared<const CurveTable>(curve, 1 << 12), std::make_shared<const CurveTable>(curve, 1 << 13)};
}

CapMeasureContext make_cap_context(std::shared_ptr<const SurfaceFunction> curve, double theta0,
                                   std::vector<std::shared_ptr<const CurveTable>> tables) {
  if (curve->dim() != 2 || !curve->is_gauge())
    throw InputError("cap measure: the curve must be a degree-1 homogeneous gauge in dimension 2");
  CapMeasureContext ctx;
  ctx.curve = curve;
  ctx.theta0 = wrap(theta0);
  const double u[2] = {std::cos(ctx.theta0), std::sin(ctx.theta0)};
  const double rho = 1.0 / curve->value(u);
  ctx.t0 = {rho * u[0], rho * u[1]};
  if (std::abs(curve->value(ctx.t0) - 1.0) > 1e-10) throw NumericError("cap measure: ψ(t0) != 1");
  double g[2];
  curve->gradient(ctx.t0, g);
  const double gn = std::hypot(g[0], g[1]);
  ctx.normal = {g[0] / gn, g[1] / gn};
  ctx.tangent = {-ctx.normal[1], ctx.normal[0]};
  ctx.tables = tables.empty() ? make_curve_tables(curve) : std::move(tables);
  return ctx;
}

nlohmann::json CapMeasureContext::to_json() const {
  return {{"theta0", theta0}, {"t0", t0}, {"tangent", tangent}, {"normal", normal}};
}

namespace {

double arc_span(const CurveTable& T, double a, double b) {
  // a <= b, b - a <= 2π, angles unwrapped.
  const double an = wrap(a);
  const double bn = an + (b - a);
  if (bn <= kTwoPi) return T.arc_to(bn) - T.arc_to(an);
  return (T.total_length() - T.arc_to(an)) + T.arc_to(bn - kTwoPi);
}

double cap_on_table(const CapMeasureContext& ctx, const CurveTable& T, double eps) {
  const int N = T.size();
  auto dist_pt = [&](const std::array<double, 2>& p) { return dot({ctx.t0[0] - p[0], ctx.t0[1] - p[1]}, ctx.normal); };
  auto dist_theta = [&](double th) { return dist_pt(T.point(th)); };
  const int i0 = std::clamp(static_cast<int>(std::floor(ctx.theta0 / kTwoPi * N)), 0, N - 1);
  const double step = kTwoPi / N;

  // Forward nodes k = 1..N sit at angle θ_{i0} + k·step; backward nodes k = 1..N at θ_{i0+1} - k·step.
  auto fwd_angle = [&](int k) { return T.angle(i0) + k * step; };
  auto bwd_angle = [&](int k) { return T.angle(i0) + step - k * step; };
  auto fwd_dist = [&](int k) { return dist_pt(T.node((i0 + k) % N)); };
  auto bwd_dist = [&](int k) { return dist_pt(T.node(((i0 + 1 - k) % N + N) % N)); };

  int kmax = 1;
  double dmax = -1.0;
  for (int k = 1; k <= N; ++k) {
    const double d = fwd_dist(k);
    if (d > dmax) {
      dmax = d;
      kmax = k;
    }
  }
  if (eps >= dmax) return T.total_length();

  auto crossing = [&](auto dist_k, auto angle_k, int klimit, bool forward) {
    // Last k in [1, klimit] with dist <= eps on the (nondecreasing) sampled run.
    int lo = 0, hi = klimit;
    while (lo < hi) {
      const int mid = (lo + hi + 1) / 2;
      if (dist_k(mid) <= eps)
        lo = mid;
      else
        hi = mid - 1;
    }
    const double a = lo == 0 ? ctx.theta0 : angle_k(lo);
    const double b = angle_k(lo + 1);
    auto g = [&](double th) { return dist_theta(th) / eps - 1.0; };
    const double ga = g(a), gb = g(b);
    if (ga > 0.0 || gb < 0.0) return a;
    if (forward) return find_root_monotone(g, a, b, 1e-12);
    // Backward angles decrease; solve on the reversed interval.
    return find_root_monotone(g, b, a, 1e-12);
  };

  const int kmax_b = N + 1 - kmax;
  const double th_f = crossing(fwd_dist, fwd_angle, std::max(1, kmax - 1), true);
  const double th_b = crossing(bwd_dist, bwd_angle, std::max(1, kmax_b - 1), false);
  return arc_span(T, ctx.theta0, th_f) + arc_span(T, th_b, ctx.theta0);
}

}  // namespace

double cap_measure(const CapMeasureContext& ctx, double eps) {
  if (!(eps > 0.0)) throw InputError("cap_measure: ε must be positive");
  double prev = cap_on_table(ctx, *ctx.tables.at(0), eps);
  for (std::size_t level = 1;; ++level) {
    std::shared_ptr<const CurveTable> T;
    if (level < ctx.tables.size()) {
      T = ctx.tables[level];
    } else {
      const int n = ctx.tables.back()->size() << (level - ctx.tables.size() + 1);
      if (n > (1 << 20))
        throw ConvergenceError("cap_measure: angular refinement did not converge", prev, INFINITY);
      T = std::make_shared<const CurveTable>(ctx.curve, n);
    }
    const double cur = cap_on_table(ctx, *T, eps);
    if (std::abs(cur - prev) <= 1e-4 * std::max(std::abs(cur), 1e-300)) return cur;
    prev = cur;
  }
}

nlohmann::json Theorem5Report::to_json() const {
  return {{"eps_min", eps_min},     {"theta0_grid", theta0_grid}, {"integrals", integrals},
          {"sup_integral", sup_integral}, {"argmax_theta0", argmax_theta0}, {"band_lo", band_lo},
          {"band_hi", band_hi},     {"increments", increments}, {"ratios", ratios}};
}

Theorem5Report theorem5_integrability(std::shared_ptr<const SurfaceFunction> curve,
                                      const std::vector<double>& theta0_grid, double eps_min, int workers) {
  if (!(eps_min > 0.0 && eps_min < 1.0)) throw InputError("theorem5: eps_min must lie in (0, 1)");
  if (theta0_grid.empty()) throw InputError("theorem5: empty t0 grid");
  Theorem5Report rep;
  rep.eps_min = eps_min;
  rep.theta0_grid = theta0_grid;
  for (int k = 0;; ++k) {
    const double hi = std::ldexp(1.0, -k);
    if (hi <= eps_min) break;
    rep.band_hi.push_back(hi);
    rep.band_lo.push_back(std::max(std::ldexp(1.0, -k - 1), eps_min));
  }
  const auto tables = make_curve_tables(curve);
  const std::size_t nb = rep.band_lo.size();
  std::vector<std::vector<double>> per(theta0_grid.size(), std::vector<double>(nb));
  parallel_for(theta0_grid.size(), workers, [&](std::size_t i) {
    const CapMeasureContext ctx = make_cap_context(curve, theta0_grid[i], tables);
    for (std::size_t k = 0; k < nb; ++k) {
      per[i][k] = quad_adaptive_1d([&](double s) { return cap_measure(ctx, std::exp(s)); },
                                   std::log(rep.band_lo[k]), std::log(rep.band_hi[k]), 1e-10);
    }
  });
  std::size_t best = 0;
  for (std::size_t i = 0; i < per.size(); ++i) {
    double s = 0.0;
    for (double v : per[i]) s += v;
    rep.integrals.push_back(s);
    if (s > rep.integrals[best]) best = i;
  }
  rep.sup_integral = rep.integrals[best];
  rep.argmax_theta0 = theta0_grid[best];
  rep.increments = per[best];
  for (std::size_t k = 0; k + 1 < nb; ++k)
    rep.ratios.push_back(rep.increments[k] > 0.0 ? rep.increments[k + 1] / rep.increments[k] : INFINITY);
  return rep;
}

}  // namespace czlab
