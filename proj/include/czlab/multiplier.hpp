#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "czlab/cubature.hpp"
#include "czlab/kernel.hpp"
#include "czlab/surface.hpp"

namespace czlab {

struct MultiplierQuery {
  SurfaceSpec surface;
  CZKernel kernel;
  double gamma = 0.0;
  std::vector<double> xi;  // length surface.dim()
  double eps = 0.5;
  std::optional<Profile> modulation;  // b(ψ(t)), default 1
};

struct MultiplierOptions {
  double annulus_tol = 1e-6;
  long max_cells = 200'000;  // per annulus
  int workers = 1;
};

struct AnnulusContribution {
  double r_lo = 0.0;
  double r_hi = 0.0;
  std::complex<double> value{};
  double error = 0.0;
  long cells = 0;
  bool ok = true;
  std::string failure;  // convergence diagnostics when !ok
};

struct MultiplierResult {
  std::complex<double> value{};
  double error = 0.0;
  long cells = 0;
  std::vector<AnnulusContribution> annuli;  // coarse to fine
  nlohmann::json to_json() const;
};

// Largest |γ| or |ξ| accepted.
inline constexpr double kCalibratedRange = 1e6;

// Oscillatory integral over a box family: ∫ w(c)·b(ψ(t(c)))·exp(i[γφ(ψ(t(c))) + ξ·t(c)]) dc, where
// map sends cell coordinates c to t and the non-oscillatory weight w. Cells are first refined until
// the phase-variation bound is <= π/2, then by error. When the variation over the initial boxes
// predicts more cells than the budget, fails immediately with ConvergenceError.
struct OscillatoryProblem {
  int d = 2;
  std::function<void(const std::array<double, 3>& c, std::array<double, 3>& t, double& w)> map;
  const SurfaceSpec* surface = nullptr;
  double gamma = 0.0;
  std::vector<double> xi;
  std::optional<Profile> modulation;
};
CubatureResult oscillatory_integral(const OscillatoryProblem& p, const std::vector<Box>& initial, double tol,
                                    long max_cells);

// Per-annulus contributions, coarse to fine. Convergence failures are recorded in the entry instead
// of thrown; with stop_at_failure the annuli after the first failure are left unevaluated (ok = false).
std::vector<AnnulusContribution> multiplier_annuli(const MultiplierQuery& q, const MultiplierOptions& opt,
                                                   bool stop_at_failure);

// Cells the phase-variation oracle predicts for each annulus of dyadic_annuli(q.eps); an annulus
// predicting more than the budget fails without evaluation.
std::vector<double> multiplier_predicted_cells(const MultiplierQuery& q);

// ∫_{ε <= |t| <= 1} exp(i[γφ(ψ(t)) + ξ·t])·b(ψ(t))·K(t) dt, summed over dyadic annuli from coarse to fine.
MultiplierResult truncated_multiplier_detail(const MultiplierQuery& q, const MultiplierOptions& opt = {});
std::complex<double> truncated_multiplier(const MultiplierQuery& q, const MultiplierOptions& opt = {});

// Radii [r_lo, r_hi] of the annuli used for truncation ε: [2^-j-1, 2^-j] down to ε.
std::vector<std::array<double, 2>> dyadic_annuli(double eps);

}  // namespace czlab
