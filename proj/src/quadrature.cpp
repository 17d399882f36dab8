#include "czlab/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "czlab/errors.hpp"

namespace czlab {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Panel {
  T k15;
  double err;
};

template <class T, class F>
Panel<T> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const T fc = f(c);
  T rk = fc * kWgk[7];
  T rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const T f1 = f(c - dx), f2 = f(c + dx);
    rk += (f1 + f2) * kWgk[j];
    if (j % 2 == 1) rg += (f1 + f2) * kWg[j / 2];
  }
  rk *= h;
  rg *= h;
  return {rk, std::abs(rk - rg)};
}

bool finite_value(double v) { return std::isfinite(v); }
bool finite_value(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

template <class T, class F>
QuadResult<T> adaptive(const F& f, double a, double b, double tol, QuadOptions opt) {
  if (!(a <= b)) throw InputError("quad_adaptive_1d: a > b");
  if (!(tol > 0.0)) throw InputError("quad_adaptive_1d: tol must be positive");
  QuadResult<T> out;
  if (a == b) return out;
  const double total = b - a;
  auto checked = [&](double x) {
    const T v = f(x);
    if (!finite_value(v)) throw NumericError("quad_adaptive_1d: non-finite sample at x = " + std::to_string(x));
    return v;
  };
  struct Item {
    double lo, hi;
    int depth;
  };
  std::vector<Item> stack{{a, b, 0}};
  T acc{};
  double err = 0.0;
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    const Panel<T> p = gk15<T>(checked, it.lo, it.hi);
    ++out.panels;
    const double local = tol * (it.hi - it.lo) / total;
    if (p.err <= local || it.hi - it.lo <= 1e-15 * total) {
      acc += p.k15;
      err += p.err;
      continue;
    }
    if (it.depth >= opt.max_depth || out.panels >= opt.max_panels) {
      T partial = acc + p.k15;
      for (const Item& rest : stack) partial += gk15<T>(checked, rest.lo, rest.hi).k15;
      throw ConvergenceError("quad_adaptive_1d: recursion limit reached near x = " + std::to_string(it.lo),
                             std::complex<double>(partial), err + p.err);
    }
    const double mid = 0.5 * (it.lo + it.hi);
    // Right half pushed first so the left half is processed first.
    stack.push_back({mid, it.hi, it.depth + 1});
    stack.push_back({it.lo, mid, it.depth + 1});
  }
  out.value = acc;
  out.error = err;
  return out;
}

}  // namespace

QuadResult<double> quad_adaptive_1d_detail(const std::function<double(double)>& f, double a, double b,
                                           double tol, QuadOptions opt) {
  return adaptive<double>(f, a, b, tol, opt);
}

QuadResult<std::complex<double>> quad_adaptive_1d_complex(
    const std::function<std::complex<double>(double)>& f, double a, double b, double tol, QuadOptions opt) {
  return adaptive<std::complex<double>>(f, a, b, tol, opt);
}

double quad_adaptive_1d(const std::function<double(double)>& f, double a, double b, double tol) {
  return quad_adaptive_1d_detail(f, a, b, tol).value;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InputError("gauss_legendre: n must be positive");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) {
      p1 = x;
      p0 = 1.0;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

}  // namespace czlab
