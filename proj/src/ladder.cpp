#include "czlab/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "czlab/errors.hpp"

namespace czlab {

namespace {

int pure_axis(const Exponent& e) {
  int axis = -1;
  for (int i = 0; i < static_cast<int>(e.size()); ++i)
    if (e[i] > 0) {
      if (axis >= 0) return -1;
      axis = i;
    }
  return axis;
}

// Minimum over unit vectors u in span{e_i : i in axes} of sum_{d <= ell} H_d(u)^2, relative to
// its maximum. Sampled, then refined by a shrinking pattern search from the best samples.
double relative_min_flatness(const MultiPoly& psi, int ell, const std::vector<int>& axes) {
  const int k = static_cast<int>(axes.size());
  const int dim = psi.dim();
  std::vector<MultiPoly> parts;
  for (int d = 2; d <= ell; ++d) parts.push_back(psi.homogeneous_part(d));
  auto energy = [&](const std::vector<double>& ang) {
    std::vector<double> u(k);
    if (k == 1) {
      u[0] = 1.0;
    } else if (k == 2) {
      u = {std::cos(ang[0]), std::sin(ang[0])};
    } else {
      u = {std::sin(ang[0]) * std::cos(ang[1]), std::sin(ang[0]) * std::sin(ang[1]), std::cos(ang[0])};
    }
    std::vector<double> x(dim, 0.0);
    for (int i = 0; i < k; ++i) x[axes[i]] = u[i];
    double s = 0.0;
    for (const auto& h : parts) {
      const double v = h.eval(x);
      s += v * v;
    }
    return s;
  };
  if (k == 1) return 1.0;
  std::vector<std::vector<double>> samples;
  if (k == 2) {
    for (int i = 0; i < 4096; ++i) samples.push_back({std::numbers::pi * i / 4096.0});
  } else {
    for (int i = 0; i < 128; ++i)
      for (int j = 0; j < 128; ++j)
        samples.push_back({std::numbers::pi * (i + 0.5) / 128.0, 2.0 * std::numbers::pi * j / 128.0});
  }
  std::vector<std::pair<double, std::size_t>> vals;
  double mx = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double e = energy(samples[i]);
    mx = std::max(mx, e);
    vals.push_back({e, i});
  }
  if (mx == 0.0) return 0.0;
  std::sort(vals.begin(), vals.end());
  double best = vals.front().first;
  for (int s = 0; s < std::min<int>(8, vals.size()); ++s) {
    std::vector<double> p = samples[vals[s].second];
    double fp = vals[s].first;
    double step = k == 2 ? std::numbers::pi / 4096.0 : std::numbers::pi / 128.0;
    while (step > 1e-14) {
      bool moved = false;
      for (std::size_t c = 0; c < p.size(); ++c)
        for (double sg : {-1.0, 1.0}) {
          std::vector<double> q = p;
          q[c] += sg * step;
          const double fq = energy(q);
          if (fq < fp) {
            p = q;
            fp = fq;
            moved = true;
          }
        }
      if (!moved) step *= 0.5;
    }
    best = std::min(best, fp);
  }
  return best / mx;
}

}  // namespace

FlatnessLadder flatness_ladder(const MultiPoly& psi) {
  const int dim = psi.dim();
  FlatnessLadder L;
  L.dim = dim;
  L.axis_order.assign(dim, 0);
  for (const auto& [e, c] : psi.terms()) {
    int deg = 0;
    for (int v : e) deg += v;
    if (deg < 2) throw InputError("flatness_ladder: ψ must vanish to second order at the origin");
    const int a = pure_axis(e);
    if (a >= 0 && (L.axis_order[a] == 0 || deg < L.axis_order[a])) L.axis_order[a] = deg;
  }
  for (int i = 0; i < dim; ++i)
    if (L.axis_order[i] == 0)
      throw FiniteTypeError("flatness_ladder: ψ has no pure power along axis " + std::to_string(i) +
                            ", so that axis lies in every E_ell (not of finite type)");

  const int top = *std::max_element(L.axis_order.begin(), L.axis_order.end());
  L.ell0 = *std::min_element(L.axis_order.begin(), L.axis_order.end());
  if (!psi.truncated(L.ell0 - 1).is_zero())
    throw OrientationError("flatness_ladder: mixed terms of degree below the smallest pure power");

  for (int ell = L.ell0; ell < top; ++ell) {
    std::vector<int> flat, steep;
    for (int i = 0; i < dim; ++i) (L.axis_order[i] > ell ? flat : steep).push_back(i);
    const MultiPoly low_on_flat = psi.truncated(ell).restrict_zero(steep);
    if (!low_on_flat.is_zero())
      throw OrientationError("flatness_ladder: terms of degree <= " + std::to_string(ell) +
                             " mix the flat axes; E_ell is not axis-aligned");
    if (relative_min_flatness(psi, ell, steep) < 1e-18)
      throw OrientationError("flatness_ladder: a flat direction outside the coordinate axes was found at level " +
                             std::to_string(ell));
  }
  if (relative_min_flatness(psi, top, [&] {
        std::vector<int> all(dim);
        for (int i = 0; i < dim; ++i) all[i] = i;
        return all;
      }()) < 1e-18)
    throw OrientationError("flatness_ladder: a flat direction outside the coordinate axes was found at level " +
                           std::to_string(top));

  for (int ell = 1; ell <= top; ++ell) {
    LadderLevel lv;
    lv.ell = ell;
    for (int i = 0; i < dim; ++i)
      if (L.axis_order[i] > ell) {
        std::vector<double> b(dim, 0.0);
        b[i] = 1.0;
        lv.basis.push_back(b);
      }
    L.levels.push_back(lv);
  }
  L.codim = dim;
  for (const auto& lv : L.levels)
    if (lv.ell == L.ell0) L.codim = dim - static_cast<int>(lv.basis.size());
  if (L.codim == 1) {
    std::vector<double> v(dim, 0.0);
    for (int i = 0; i < dim; ++i)
      if (L.axis_order[i] == L.ell0) v[i] = 1.0;
    L.normal_v = v;
  }
  return L;
}

nlohmann::json FlatnessLadder::to_json() const {
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& l : levels) lv.push_back({{"ell", l.ell}, {"basis", l.basis}});
  nlohmann::json j = {{"dim", dim}, {"levels", lv}, {"ell0", ell0}, {"codim", codim}, {"axis_order", axis_order}};
  j["normal_v"] = normal_v ? nlohmann::json(*normal_v) : nlohmann::json(nullptr);
  return j;
}

FlatnessLadder FlatnessLadder::from_json(const nlohmann::json& j) {
  FlatnessLadder L;
  L.dim = j.at("dim").get<int>();
  for (const auto& l : j.at("levels"))
    L.levels.push_back({l.at("ell").get<int>(), l.at("basis").get<std::vector<std::vector<double>>>()});
  L.ell0 = j.at("ell0").get<int>();
  L.codim = j.at("codim").get<int>();
  L.axis_order = j.at("axis_order").get<std::vector<int>>();
  if (!j.at("normal_v").is_null()) L.normal_v = j.at("normal_v").get<std::vector<double>>();
  return L;
}

}  // namespace czlab
