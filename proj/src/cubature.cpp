#include "czlab/cubature.hpp"

#include <cmath>
#include <cstdio>
#include <queue>

#include "czlab/errors.hpp"

namespace czlab {

std::string Box::describe() const {
  std::string s = "[";
  char buf[96];
  for (int i = 0; i < d; ++i) {
    std::snprintf(buf, sizeof buf, "%s[%.6g, %.6g]", i ? " x " : "", lo[i], hi[i]);
    s += buf;
  }
  return s + "]";
}

namespace {

struct RuleValue {
  std::complex<double> value;
  double error;
  int split_axis;
};

struct GenzMalik {
  int d;
  double l2 = std::sqrt(9.0 / 70.0), l3 = std::sqrt(9.0 / 10.0), l4 = std::sqrt(9.0 / 10.0),
         l5 = std::sqrt(9.0 / 19.0);
  double w1, w2, w3, w4, w5, v1, v2, v3, v4;
  int points;

  explicit GenzMalik(int dim) : d(dim) {
    const double dd = d;
    w1 = (12824.0 - 9120.0 * dd + 400.0 * dd * dd) / 19683.0;
    w2 = 980.0 / 6561.0;
    w3 = (1820.0 - 400.0 * dd) / 19683.0;
    w4 = 200.0 / 19683.0;
    w5 = 6859.0 / 19683.0 / static_cast<double>(1 << d);
    v1 = (729.0 - 950.0 * dd + 50.0 * dd * dd) / 729.0;
    v2 = 245.0 / 486.0;
    v3 = (265.0 - 100.0 * dd) / 1458.0;
    v4 = 25.0 / 729.0;
    points = (1 << d) + 2 * d * d + 2 * d + 1;
  }

  RuleValue apply(const CellIntegrand& f, const Box& b) const {
    std::array<double, 3> c{}, h{};
    double vol = 1.0;
    for (int i = 0; i < d; ++i) {
      c[i] = 0.5 * (b.lo[i] + b.hi[i]);
      h[i] = 0.5 * (b.hi[i] - b.lo[i]);
      vol *= 2.0 * h[i];
    }
    const std::complex<double> f0 = f(c);
    std::complex<double> s2{}, s3{}, s4{}, s5{};
    double best = -1.0;
    int axis = 0;
    for (int i = 0; i < d; ++i) {
      auto p = c;
      p[i] = c[i] + l2 * h[i];
      const auto a1 = f(p);
      p[i] = c[i] - l2 * h[i];
      const auto a2 = f(p);
      p[i] = c[i] + l3 * h[i];
      const auto b1 = f(p);
      p[i] = c[i] - l3 * h[i];
      const auto b2 = f(p);
      s2 += a1 + a2;
      s3 += b1 + b2;
      const double diff = std::abs(a1 + a2 - 2.0 * f0 - (l2 * l2 / (l3 * l3)) * (b1 + b2 - 2.0 * f0));
      if (diff > best * (1.0 + 1e-12) ||
          (std::abs(diff - best) <= 1e-12 * best && b.width(i) > b.width(axis))) {
        best = diff;
        axis = i;
      }
    }
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        for (int si = -1; si <= 1; si += 2)
          for (int sj = -1; sj <= 1; sj += 2) {
            auto p = c;
            p[i] += si * l4 * h[i];
            p[j] += sj * l4 * h[j];
            s4 += f(p);
          }
    for (int mask = 0; mask < (1 << d); ++mask) {
      auto p = c;
      for (int i = 0; i < d; ++i) p[i] += ((mask >> i) & 1 ? l5 : -l5) * h[i];
      s5 += f(p);
    }
    const std::complex<double> r7 = vol * (w1 * f0 + w2 * s2 + w3 * s3 + w4 * s4 + w5 * s5);
    const std::complex<double> r5 = vol * (v1 * f0 + v2 * s2 + v3 * s3 + v4 * s4);
    return {r7, std::abs(r7 - r5), axis};
  }
};

struct Cell {
  Box box;
  RuleValue rv;
  bool alive;
};

std::pair<Box, Box> halves(const Box& b, int axis) {
  Box l = b, r = b;
  const double mid = 0.5 * (b.lo[axis] + b.hi[axis]);
  l.hi[axis] = mid;
  r.lo[axis] = mid;
  return {l, r};
}

}  // namespace

CubatureResult adaptive_cubature(const CellIntegrand& f, const std::vector<Box>& initial,
                                 const SplitOracle& oracle, const CubatureOptions& opt) {
  if (initial.empty()) return {};
  const int d = initial.front().d;
  if (d < 2 || d > 3) throw InputError("adaptive_cubature: dimension must be 2 or 3");
  const GenzMalik rule(d);

  std::vector<Box> accepted;
  std::vector<Box> stack(initial.rbegin(), initial.rend());
  while (!stack.empty()) {
    const Box b = stack.back();
    stack.pop_back();
    const int axis = oracle ? oracle(b) : -1;
    if (axis < 0) {
      accepted.push_back(b);
    } else {
      auto [l, r] = halves(b, axis);
      stack.push_back(r);
      stack.push_back(l);
    }
    if (static_cast<long>(accepted.size() + stack.size()) > opt.max_cells)
      throw ConvergenceError("adaptive_cubature: oscillation refinement exceeds the cell budget of " +
                                 std::to_string(opt.max_cells),
                             {}, INFINITY, b.describe());
  }

  CubatureResult out;
  std::vector<Cell> cells;
  cells.reserve(accepted.size() * 2);
  using Entry = std::pair<double, long>;
  auto cmp = [](const Entry& a, const Entry& b) {
    return a.first < b.first || (a.first == b.first && a.second > b.second);
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> heap(cmp);
  double total_err = 0.0;
  for (const Box& b : accepted) {
    const RuleValue rv = rule.apply(f, b);
    out.evaluations += rule.points;
    if (!std::isfinite(rv.value.real()) || !std::isfinite(rv.value.imag()))
      throw NumericError("adaptive_cubature: non-finite integrand on " + b.describe());
    cells.push_back({b, rv, true});
    heap.push({rv.error, static_cast<long>(cells.size() - 1)});
    total_err += rv.error;
  }

  auto sum_alive = [&](std::complex<double>& v, double& e) {
    v = {};
    e = 0.0;
    for (const Cell& c : cells)
      if (c.alive) {
        v += c.rv.value;
        e += c.rv.error;
      }
  };

  long alive = static_cast<long>(cells.size());
  while (true) {
    if (total_err <= opt.abs_tol) {
      std::complex<double> v;
      double e;
      sum_alive(v, e);
      total_err = e;
      if (e <= opt.abs_tol) break;
    }
    const auto [err, idx] = heap.top();
    if (alive >= opt.max_cells) {
      std::complex<double> v;
      double e;
      sum_alive(v, e);
      throw ConvergenceError("adaptive_cubature: refinement budget of " + std::to_string(opt.max_cells) +
                                 " cells exhausted with error estimate " + std::to_string(e),
                             v, e, cells[idx].box.describe());
    }
    heap.pop();
    Cell& parent = cells[idx];
    parent.alive = false;
    total_err -= parent.rv.error;
    const auto [l, r] = halves(parent.box, parent.rv.split_axis);
    for (const Box& child : {l, r}) {
      const RuleValue rv = rule.apply(f, child);
      out.evaluations += rule.points;
      if (!std::isfinite(rv.value.real()) || !std::isfinite(rv.value.imag()))
        throw NumericError("adaptive_cubature: non-finite integrand on " + child.describe());
      cells.push_back({child, rv, true});
      heap.push({rv.error, static_cast<long>(cells.size() - 1)});
      total_err += rv.error;
    }
    ++alive;
  }
  sum_alive(out.value, out.error);
  out.cells = alive;
  return out;
}

}  // namespace czlab
