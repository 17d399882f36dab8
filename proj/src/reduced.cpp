#include "czlab/reduced.hpp"

#include <algorithm>
#include <cmath>

#include "czlab/errors.hpp"
#include "czlab/implicit_height.hpp"
#include "czlab/quadrature.hpp"

namespace czlab {

NearIdentity height_near_identity(const SurfaceSpec& spec, const SchulzForm& form) {
  if (form.r != 1) throw UnsupportedConfigError("height_near_identity: requires one pure variable");
  const double scale = std::pow(form.coeff_pure[0], 1.0 / form.ell0);
  const std::vector<double> x0(form.flat_axes.size(), 0.0);
  NearIdentity q;
  q.label = "implicit-height";
  auto y = [spec, form, x0, scale](double l) {
    if (l <= 0.0) return 0.0;
    return scale * implicit_height(spec, form, x0, std::min(l, 1.0), 1e-14);
  };
  q.q = y;
  q.dq = [y](double l) {
    if (l <= 0.0) return 1.0;
    const double h = 1e-4 * l;
    const double hi = std::min(l + h, 1.0);
    return (y(hi) - y(l - h)) / (hi - (l - h));
  };
  return q;
}

double reduced_cap(const ReducedIntegralSpec& s) {
  double cap = 1.0;
  if (s.xi_cap != 0.0) cap = std::min(cap, 1.0 / std::abs(s.xi_cap));
  if (s.eta != 0.0) cap = std::min(cap, std::pow(std::abs(s.eta), -s.b));
  return cap;
}

ReducedForm reduced_form_from_string(const std::string& s) {
  if (s == "sine") return ReducedForm::Sine;
  if (s == "one-sided" || s == "one-sided-phase") return ReducedForm::OneSided;
  throw InputError("reduced integral: unknown form '" + s + "'");
}

std::complex<double> reduced_integral(const ReducedIntegralSpec& s) {
  if (!(s.b >= 0.0 && s.b < 1.0)) throw InputError("reduced integral: b must lie in [0, 1)");
  if (!(s.tol > 0.0)) throw InputError("reduced integral: tolerance must be positive");
  const double g = s.gamma, eta = s.eta;
  if (s.form == ReducedForm::Sine) {
    if (eta == 0.0) return {};
    const double cap = reduced_cap(s);
    auto f = [&](double l) -> std::complex<double> {
      const double amp = l > 0.0 ? std::sin(eta * s.q.q(l)) / l : eta * s.q.dq(0.0);
      const double ph = g * s.phi_bar(l);
      return amp * std::complex<double>(std::cos(ph), std::sin(ph));
    };
    // |integrand| <= |η| sup q', so pieces below `floor` contribute at most tol/4.
    const double bound = std::abs(eta) * 2.0;
    const double floor = std::min(cap, 0.25 * s.tol / std::max(bound, 1e-300));
    std::complex<double> total{};
    double hi = cap;
    int pieces = 0;
    while (hi > floor) {
      const double lo = std::max(0.5 * hi, floor);
      total += quad_adaptive_1d_complex(f, lo, hi, 0.5 * s.tol * (hi - lo) / cap).value;
      hi = lo;
      if (++pieces > 2000) break;
    }
    total += quad_adaptive_1d_complex(f, 0.0, hi, 0.25 * s.tol).value;
    return total;
  }
  if (!(eta > 1.0)) throw InputError("reduced integral: the one-sided form needs η > 1");
  auto f = [&](double t) -> std::complex<double> {
    const double ph = g * s.phi_bar(t) - eta * s.q.q(t);
    return std::complex<double>(std::cos(ph), std::sin(ph)) / t;
  };
  std::complex<double> total{};
  const double a = 1.0 / eta;
  const double len = std::log(eta);
  for (double lo = a; lo < 1.0;) {
    const double hi = std::min(2.0 * lo, 1.0);
    total += quad_adaptive_1d_complex(f, lo, hi, s.tol * std::log(hi / lo) / len).value;
    lo = hi;
  }
  return total;
}

}  // namespace czlab
