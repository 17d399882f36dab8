#include "czlab/gauge.hpp"

#include <cmath>
#include <random>

#include "czlab/errors.hpp"

namespace czlab {

double LevelSetChart::density_h(std::span<const double> omega) const {
  const auto g = H.grad(omega);
  double n2 = 0.0;
  for (double v : g) n2 += v * v;
  if (!(n2 > 0.0)) throw DegenerateDirectionError("density_h: ∇H vanishes");
  return deg / std::sqrt(n2);
}

double LevelSetChart::angular_weight(std::span<const double> theta) const {
  return std::pow(gauge_radius(*this, theta), r());
}

LevelSetChart make_chart(const MultiPoly& H, double deg) {
  if (!(deg > 0.0)) throw InputError("make_chart: degree must be positive");
  std::mt19937_64 rng(0xc4a27ULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0), sc(0.1, 3.0);
  for (int k = 0; k < 64; ++k) {
    std::vector<double> x(H.dim()), y(H.dim());
    const double c = sc(rng);
    for (int i = 0; i < H.dim(); ++i) {
      x[i] = u(rng);
      y[i] = c * x[i];
    }
    const double a = H.eval(y), b = std::pow(c, deg) * H.eval(x);
    if (std::abs(a - b) > 1e-10 * (1.0 + std::abs(a) + std::abs(b)))
      throw InputError("make_chart: H is not homogeneous of the given degree");
  }
  LevelSetChart ch;
  ch.H = H;
  ch.deg = deg;
  for (int i = 0; i < H.dim(); ++i) ch.axes.push_back(i);
  return ch;
}

LevelSetChart make_chart(const SchulzForm& form) {
  MultiPoly Hr(form.r);
  for (const auto& [e, c] : form.H.terms()) {
    Exponent er(form.r);
    for (int k = 0; k < form.r; ++k) er[k] = e[form.pure_axes[k]];
    Hr.add_term(er, c);
  }
  LevelSetChart ch = make_chart(Hr, form.ell0);
  ch.axes = form.pure_axes;
  return ch;
}

double gauge_radius(const LevelSetChart& chart, std::span<const double> theta) {
  const double h = chart.H.eval(theta);
  if (!(h > 0.0)) throw DegenerateDirectionError("gauge_radius: H(θ) <= 0");
  return std::pow(h, -1.0 / chart.deg);
}

}  // namespace czlab
