#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace czlab {

struct Box {
  int d = 2;
  std::array<double, 3> lo{};
  std::array<double, 3> hi{};

  double width(int i) const { return hi[i] - lo[i]; }
  std::string describe() const;
};

using CellIntegrand = std::function<std::complex<double>(const std::array<double, 3>&)>;

// Returns the axis to split, or -1 when the box is acceptable as a quadrature cell.
using SplitOracle = std::function<int(const Box&)>;

struct CubatureOptions {
  double abs_tol = 1e-6;
  long max_cells = 200'000;
};

struct CubatureResult {
  std::complex<double> value{};
  double error = 0.0;
  long cells = 0;
  long evaluations = 0;
};

// Two-stage adaptive cubature on boxes of dimension 2 or 3: boxes are first split until the
// oracle accepts them, then a Genz-Malik degree 7/5 embedded rule drives error-based refinement
// until the summed error estimate is <= abs_tol. Deterministic: leaf values are summed in
// creation order.
CubatureResult adaptive_cubature(const CellIntegrand& f, const std::vector<Box>& initial,
                                 const SplitOracle& oracle, const CubatureOptions& opt);

}  // namespace czlab
