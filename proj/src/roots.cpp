#include "czlab/roots.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "czlab/errors.hpp"

namespace czlab {

namespace {

double solve(const std::function<double(double)>& f, const std::function<double(double)>* df,
             double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw InputError("find_root_monotone: tol must be positive");
  if (!(lo <= hi)) throw InputError("find_root_monotone: lo > hi");
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb))
    throw NumericError("find_root_monotone: non-finite value at bracket end");
  if (fa * fb > 0.0)
    throw BracketError("find_root_monotone: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  const double target = tol * (1.0 + std::abs(fa) + std::abs(fb));
  if (std::abs(fa) <= target) return a;
  if (std::abs(fb) <= target) return b;

  // Orient so that f(a) < 0 < f(b) in value terms.
  const bool increasing = fa < 0.0;
  double x = 0.5 * (a + b);
  double prev_width = b - a;
  for (int it = 0; it < 400; ++it) {
    const double fx = f(x);
    if (!std::isfinite(fx)) throw NumericError("find_root_monotone: non-finite value");
    if (std::abs(fx) <= target) return x;
    if ((fx < 0.0) == increasing) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    const double width = b - a;
    if (width <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b)) ||
        width == 0.0)
      return std::abs(fa) < std::abs(fb) ? a : b;

    double cand = std::numeric_limits<double>::quiet_NaN();
    if (df) {
      const double d = (*df)(x);
      if (d != 0.0 && std::isfinite(d)) cand = x - fx / d;
    } else {
      cand = a - fa * (b - a) / (fb - fa);
    }
    // Bisect when the candidate leaves the bracket or the bracket is not shrinking fast enough.
    const bool stalled = width > 0.5 * prev_width;
    if (!std::isfinite(cand) || cand <= a || cand >= b || (stalled && it % 2 == 1)) cand = 0.5 * (a + b);
    prev_width = width;
    x = cand;
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

}  // namespace

double find_root_monotone(const std::function<double(double)>& f, double lo, double hi, double tol) {
  return solve(f, nullptr, lo, hi, tol);
}

double find_root_monotone(const std::function<double(double)>& f,
                          const std::function<double(double)>& df, double lo, double hi,
                          double tol) {
  return solve(f, &df, lo, hi, tol);
}

}  // namespace czlab
