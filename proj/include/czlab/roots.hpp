#pragma once

#include <functional>

namespace czlab {

// Safeguarded Newton (secant when no derivative is given) with bisection fallback.
// Returns x in [lo, hi] with |f(x)| <= tol * (1 + |f(lo)| + |f(hi)|), or the midpoint of a
// bracket that has shrunk to rounding width.
double find_root_monotone(const std::function<double(double)>& f, double lo, double hi,
                          double tol = 1e-10);

double find_root_monotone(const std::function<double(double)>& f,
                          const std::function<double(double)>& df, double lo, double hi,
                          double tol = 1e-10);

}  // namespace czlab
