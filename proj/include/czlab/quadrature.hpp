#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace czlab {

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  long panels = 0;
};

struct QuadOptions {
  int max_depth = 60;
  long max_panels = 2'000'000;
};

// Gauss-Kronrod 7-15 panels; a panel is accepted when its estimate is <= tol * len / (b - a).
QuadResult<double> quad_adaptive_1d_detail(const std::function<double(double)>& f, double a, double b,
                                           double tol, QuadOptions opt = {});

QuadResult<std::complex<double>> quad_adaptive_1d_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b, double tol,
    QuadOptions opt = {});

double quad_adaptive_1d(const std::function<double(double)>& f, double a, double b, double tol);

// Fixed n-point Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace czlab
