#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "czlab/kernel.hpp"
#include "czlab/multiplier.hpp"
#include "czlab/surface.hpp"

namespace czlab {

// Logarithmic grid lo..hi with `per_decade` points per decade, endpoints included.
std::vector<double> log_grid(double lo, double hi, int per_decade);

struct SweepConfig {
  nlohmann::json surface;
  nlohmann::json phi;
  nlohmann::json phi_bar;
  nlohmann::json kernel;
  nlohmann::json modulation;
  std::vector<double> eps_levels;  // strictly decreasing
  std::vector<double> gamma_grid;
  std::vector<double> xi_grid;
  std::vector<double> eta_grid;
  // "product" (γ × ξ × η) or "necessity" (the counterexample sequence with γ_j <= 1e6).
  std::string grid_mode = "product";
  int necessity_j_max = 14;
  std::optional<int> eta_axis;
  std::vector<double> xi_direction;  // empty: unit vector of ones on the axes other than eta_axis
  double annulus_tol = 1e-6;
  long max_cells = 200'000;
  double slope_threshold = 0.02;
  double fit_tol_factor = 0.05;
  double jitter = 0.0;  // relative log-jitter of grid values, seeded
  // Skip evaluation when predicted failures alone already make the verdict inconclusive.
  bool stop_when_inconclusive = true;
  unsigned long long seed = 1;

  static SweepConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SweepPoint {
  double gamma = 0.0;
  double xi = 0.0;
  double eta = 0.0;
  std::vector<double> dual;  // full dual vector η e_axis + ξ direction
};

struct SweepRecord {
  std::size_t point = 0;
  double eps = 0.0;
  bool ok = false;
  std::complex<double> value{};
  std::string failure;
  bool predicted_failure = false;  // failed by the cell-count prediction, without evaluation
  bool skipped = false;            // not evaluated because the sweep stopped early
};

struct SweepReport {
  SweepConfig config;
  std::vector<SweepPoint> points;
  std::vector<SweepRecord> records;  // point-major, then ε level
  std::vector<double> sup_abs;       // per ε level
  double c0 = 0.0;
  double c1 = 0.0;
  double residual = 0.0;  // RMS of the fit
  double fit_tol = 0.0;
  long failures = 0;   // records that failed, evaluated or predicted
  long skipped = 0;    // records left unevaluated after an early stop
  double failure_rate = 0.0;
  std::string verdict;  // bounded | log-growth | inconclusive

  nlohmann::json to_json() const;
  static SweepReport from_json(const nlohmann::json& j);
  std::string to_csv() const;
  std::string plot_data() const;
};

// Grid points and dual vectors, in evaluation order.
std::vector<SweepPoint> sweep_points(const SweepConfig& cfg, const SurfaceSpec& surface);

SweepReport run_sweep(const SweepConfig& cfg, int workers = 1);

// Verdict from per-level sups and the failure rate.
inline constexpr double kMaxFailureRate = 0.01;

std::string sweep_verdict(double c1, double residual, double fit_tol, double failure_rate, double slope_threshold);

}  // namespace czlab
