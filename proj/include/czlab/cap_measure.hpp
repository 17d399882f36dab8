#pragma once

#include <array>
#include <memory>
#include <vector>

#include <json.hpp>

#include "czlab/surface.hpp"

namespace czlab {

// Curve ψ = 1 sampled at N equally spaced polar angles, with cumulative arc length.
class CurveTable {
 public:
  CurveTable(std::shared_ptr<const SurfaceFunction> curve, int n);
  int size() const { return n_; }
  double angle(int i) const;
  std::array<double, 2> point(double theta) const;
  const std::array<double, 2>& node(int i) const { return pts_[i]; }
  // Arc length from angle 0 to theta, theta in [0, 2π].
  double arc_to(double theta) const;
  double total_length() const { return cum_.back(); }

 private:
  double speed(double theta) const;
  double arc_between(double a, double b) const;

  std::shared_ptr<const SurfaceFunction> curve_;
  int n_;
  std::vector<std::array<double, 2>> pts_;
  std::vector<double> cum_;
};

struct CapMeasureContext {
  std::shared_ptr<const SurfaceFunction> curve;
  double theta0 = 0.0;
  std::array<double, 2> t0{};
  std::array<double, 2> tangent{};
  std::array<double, 2> normal{};  // outward unit normal at t0
  std::vector<std::shared_ptr<const CurveTable>> tables;  // resolutions 2^12, 2^13

  nlohmann::json to_json() const;
};

// The curve must be a gauge (ψ homogeneous of degree 1) in dimension 2.
std::vector<std::shared_ptr<const CurveTable>> make_curve_tables(std::shared_ptr<const SurfaceFunction> curve);
CapMeasureContext make_cap_context(std::shared_ptr<const SurfaceFunction> curve, double theta0,
                                   std::vector<std::shared_ptr<const CurveTable>> tables = {});

// |E(t0, ε)|: arc length of the curve within distance ε of the tangent line at t0.
double cap_measure(const CapMeasureContext& ctx, double eps);

struct Theorem5Report {
  double eps_min = 0.0;
  std::vector<double> theta0_grid;
  std::vector<double> integrals;        // per t0
  double sup_integral = 0.0;
  double argmax_theta0 = 0.0;
  std::vector<double> band_lo;          // band k covers [band_lo[k], band_hi[k]]
  std::vector<double> band_hi;
  std::vector<double> increments;       // per band, at the maximizing t0
  std::vector<double> ratios;           // increments[k + 1] / increments[k]
  nlohmann::json to_json() const;
};

Theorem5Report theorem5_integrability(std::shared_ptr<const SurfaceFunction> curve,
                                      const std::vector<double>& theta0_grid, double eps_min, int workers = 1);

}  // namespace czlab
