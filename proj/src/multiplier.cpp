#include "czlab/multiplier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "czlab/errors.hpp"
#include "czlab/parallel.hpp"

namespace czlab {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

void check_range(double gamma, const std::vector<double>& xi) {
  if (!std::isfinite(gamma) || std::abs(gamma) > kCalibratedRange)
    throw RangeError("multiplier: |γ| exceeds the calibrated range 1e6");
  for (double v : xi)
    if (!std::isfinite(v) || std::abs(v) > kCalibratedRange)
      throw RangeError("multiplier: |ξ| exceeds the calibrated range 1e6");
}

// Samples of a cell on its 3^d grid.
struct CellSamples {
  int d;
  std::array<std::array<double, 3>, 27> t{};
  std::array<double, 27> psi{};
  int index(int i, int j, int k) const { return i + 3 * j + (d == 3 ? 9 * k : 0); }
};

class PhaseVariation {
 public:
  explicit PhaseVariation(const OscillatoryProblem& p) : p_(p) {
    for (double v : p.xi) xi_norm_ += v * v;
    xi_norm_ = std::sqrt(xi_norm_);
  }

  // Per-axis bound on the phase variation along lines of the cell.
  std::array<double, 3> per_axis(const Box& b) const {
    CellSamples s{b.d};
    const int n3 = b.d == 3 ? 3 : 1;
    for (int k = 0; k < n3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
          const std::array<double, 3> c = {b.lo[0] + 0.5 * i * b.width(0), b.lo[1] + 0.5 * j * b.width(1),
                                           b.d == 3 ? b.lo[2] + 0.5 * k * b.width(2) : 0.0};
          double w;
          const int id = s.index(i, j, k);
          p_.map(c, s.t[id], w);
          s.psi[id] = p_.gamma != 0.0 ? p_.surface->eval(std::span<const double>(s.t[id].data(), b.d)) : 0.0;
        }
    std::array<double, 3> v{0.0, 0.0, 0.0};
    for (int axis = 0; axis < b.d; ++axis) {
      // Lines along `axis` indexed by the other coordinates.
      for (int a = 0; a < 3; ++a)
        for (int c = 0; c < n3; ++c) {
          int ids[3];
          for (int m = 0; m < 3; ++m) {
            int ijk[3] = {0, 0, 0};
            ijk[axis] = m;
            ijk[(axis + 1) % b.d] = a;
            if (b.d == 3) ijk[(axis + 2) % 3] = c;
            ids[m] = s.index(ijk[0], ijk[1], ijk[2]);
          }
          double var = 0.0;
          if (xi_norm_ > 0.0) {
            double len = 0.0;
            for (int m = 0; m < 2; ++m) {
              double d2 = 0.0;
              for (int q = 0; q < b.d; ++q) d2 += std::pow(s.t[ids[m + 1]][q] - s.t[ids[m]][q], 2);
              len += std::sqrt(d2);
            }
            var += xi_norm_ * len;
          }
          if (p_.gamma != 0.0) {
            const double lo = std::min({s.psi[ids[0]], s.psi[ids[1]], s.psi[ids[2]]});
            const double hi = std::max({s.psi[ids[0]], s.psi[ids[1]], s.psi[ids[2]]});
            var += std::abs(p_.gamma) * p_.surface->phi.osc_bound(std::max(lo, 0.0), std::max(hi, 0.0));
          }
          v[axis] = std::max(v[axis], var);
        }
    }
    return v;
  }

  int split_axis(const Box& b) const {
    const auto v = per_axis(b);
    double total = 0.0;
    for (int i = 0; i < b.d; ++i) total += v[i];
    if (total <= kHalfPi) return -1;
    return static_cast<int>(std::max_element(v.begin(), v.begin() + b.d) - v.begin());
  }

 private:
  const OscillatoryProblem& p_;
  double xi_norm_ = 0.0;
};

double predicted_cells(const PhaseVariation& pv, const std::vector<Box>& initial) {
  double predicted = 0.0;
  for (const Box& b : initial) {
    const auto v = pv.per_axis(b);
    double cells = 1.0;
    for (int i = 0; i < b.d; ++i) cells *= std::max(1.0, std::ceil(v[i] / kHalfPi));
    predicted += cells;
  }
  return predicted;
}

// Log-polar coordinates: dt·K(t) = Ω(θ) dv dσ(θ) with R = e^v.
OscillatoryProblem multiplier_problem(const MultiplierQuery& q) {
  const int d = q.surface.dim();
  if (q.kernel.dim() != d) throw InputError("multiplier: kernel and surface dimensions differ");
  if (static_cast<int>(q.xi.size()) != d) throw InputError("multiplier: ξ has the wrong length");
  check_range(q.gamma, q.xi);
  OscillatoryProblem p;
  p.d = d;
  p.surface = &q.surface;
  p.gamma = q.gamma;
  p.xi = q.xi;
  p.modulation = q.modulation;
  const CZKernel& K = q.kernel;
  if (d == 2) {
    p.map = [&K](const std::array<double, 3>& c, std::array<double, 3>& t, double& w) {
      const double R = std::exp(c[0]);
      const double th[2] = {std::cos(c[1]), std::sin(c[1])};
      t = {R * th[0], R * th[1], 0.0};
      w = K.omega(th);
    };
  } else {
    p.map = [&K](const std::array<double, 3>& c, std::array<double, 3>& t, double& w) {
      const double R = std::exp(c[0]);
      const double st = std::sin(c[1]);
      const double th[3] = {st * std::cos(c[2]), st * std::sin(c[2]), std::cos(c[1])};
      t = {R * th[0], R * th[1], R * th[2]};
      w = K.omega(th) * st;
    };
  }
  return p;
}

std::vector<Box> annulus_boxes(int d, double r_lo, double r_hi) {
  const double v0 = std::log(r_lo), v1 = std::log(r_hi);
  std::vector<Box> init;
  if (d == 2) {
    for (int k = 0; k < 4; ++k) {
      Box b;
      b.d = 2;
      b.lo = {v0, k * kHalfPi, 0.0};
      b.hi = {v1, (k + 1) * kHalfPi, 0.0};
      init.push_back(b);
    }
  } else {
    for (int h = 0; h < 2; ++h)
      for (int k = 0; k < 4; ++k) {
        Box b;
        b.d = 3;
        b.lo = {v0, h * kHalfPi, k * kHalfPi};
        b.hi = {v1, (h + 1) * kHalfPi, (k + 1) * kHalfPi};
        init.push_back(b);
      }
  }
  return init;
}

}  // namespace

CubatureResult oscillatory_integral(const OscillatoryProblem& p, const std::vector<Box>& initial, double tol,
                                    long max_cells) {
  check_range(p.gamma, p.xi);
  if (p.surface == nullptr) throw InputError("oscillatory_integral: missing surface");
  const PhaseVariation pv(p);
  const double predicted = predicted_cells(pv, initial);
  if (predicted > static_cast<double>(max_cells))
    throw ConvergenceError("oscillatory_integral: phase variation predicts " + std::to_string(predicted) +
                               " cells, above the budget of " + std::to_string(max_cells),
                           {}, INFINITY, initial.front().describe());

  const int d = p.d;
  auto f = [&](const std::array<double, 3>& c) -> std::complex<double> {
    std::array<double, 3> t{};
    double w = 0.0;
    p.map(c, t, w);
    if (w == 0.0) return {};
    double phase = 0.0;
    for (int i = 0; i < d; ++i) phase += p.xi[i] * t[i];
    double amp = w;
    if (p.gamma != 0.0 || p.modulation) {
      const double s = p.surface->eval(std::span<const double>(t.data(), d));
      if (p.gamma != 0.0) phase += p.gamma * p.surface->phi(s);
      if (p.modulation) amp *= (*p.modulation)(s);
    }
    return amp * std::complex<double>(std::cos(phase), std::sin(phase));
  };
  CubatureOptions co;
  co.abs_tol = tol;
  co.max_cells = max_cells;
  return adaptive_cubature(f, initial, [&](const Box& b) { return pv.split_axis(b); }, co);
}

std::vector<std::array<double, 2>> dyadic_annuli(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("multiplier: ε must lie in (0, 1)");
  std::vector<std::array<double, 2>> out;
  for (int j = 0;; ++j) {
    const double hi = std::ldexp(1.0, -j);
    const double lo = std::ldexp(1.0, -j - 1);
    if (lo <= eps) {
      out.push_back({eps, hi});
      break;
    }
    out.push_back({lo, hi});
  }
  return out;
}

nlohmann::json MultiplierResult::to_json() const {
  nlohmann::json ann = nlohmann::json::array();
  for (const auto& a : annuli)
    ann.push_back({{"r_lo", a.r_lo}, {"r_hi", a.r_hi}, {"re", a.value.real()}, {"im", a.value.imag()},
                   {"error", a.error}, {"cells", a.cells}});
  return {{"re", value.real()}, {"im", value.imag()}, {"abs", std::abs(value)},
          {"error", error},     {"cells", cells},     {"annuli", ann}};
}

std::vector<AnnulusContribution> multiplier_annuli(const MultiplierQuery& q, const MultiplierOptions& opt,
                                                   bool stop_at_failure) {
  const auto radii = dyadic_annuli(q.eps);
  const OscillatoryProblem p = multiplier_problem(q);
  std::vector<AnnulusContribution> out(radii.size());
  auto run = [&](std::size_t a) {
    const std::vector<Box> init = annulus_boxes(p.d, radii[a][0], radii[a][1]);
    AnnulusContribution& c = out[a];
    c.r_lo = radii[a][0];
    c.r_hi = radii[a][1];
    try {
      const CubatureResult cr = oscillatory_integral(p, init, opt.annulus_tol, opt.max_cells);
      c.value = cr.value;
      c.error = cr.error;
      c.cells = cr.cells;
    } catch (const ConvergenceError& e) {
      c.ok = false;
      c.value = e.partial();
      c.error = e.estimate();
      c.failure = std::string(e.what()) + " (annulus " + std::to_string(c.r_lo) + " <= |t| <= " +
                  std::to_string(c.r_hi) + "; worst cell " + e.worst_cell() + ")";
    }
  };
  if (stop_at_failure) {
    for (std::size_t a = 0; a < radii.size(); ++a) {
      run(a);
      if (!out[a].ok) {
        for (std::size_t b = a + 1; b < radii.size(); ++b) {
          out[b].r_lo = radii[b][0];
          out[b].r_hi = radii[b][1];
          out[b].ok = false;
          out[b].failure = "not evaluated after an earlier annulus failed";
        }
        break;
      }
    }
  } else {
    parallel_for(radii.size(), opt.workers, run);
  }
  return out;
}

std::vector<double> multiplier_predicted_cells(const MultiplierQuery& q) {
  const OscillatoryProblem p = multiplier_problem(q);
  const PhaseVariation pv(p);
  std::vector<double> out;
  for (const auto& r : dyadic_annuli(q.eps)) out.push_back(predicted_cells(pv, annulus_boxes(p.d, r[0], r[1])));
  return out;
}

MultiplierResult truncated_multiplier_detail(const MultiplierQuery& q, const MultiplierOptions& opt) {
  MultiplierResult res;
  res.annuli = multiplier_annuli(q, opt, false);
  for (const auto& a : res.annuli) {
    if (!a.ok) throw ConvergenceError(a.failure, res.value + a.value, a.error, a.failure);
    res.value += a.value;
    res.error += a.error;
    res.cells += a.cells;
  }
  return res;
}

std::complex<double> truncated_multiplier(const MultiplierQuery& q, const MultiplierOptions& opt) {
  return truncated_multiplier_detail(q, opt).value;
}

}  // namespace czlab
