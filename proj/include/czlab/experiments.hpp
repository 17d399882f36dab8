#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "czlab/kernel.hpp"
#include "czlab/profiles.hpp"
#include "czlab/reduced.hpp"
#include "czlab/surface.hpp"

namespace czlab {

struct DoublingResult {
  bool holds = false;
  double worst_ratio = 0.0;
  double witness = 0.0;
  nlohmann::json to_json() const;
};

// φ̄'(Cλ)/φ̄'(λ) >= 2 - 1e-9 on the grid; a vanishing pair of derivatives counts as +∞.
DoublingResult doubling_check(const Profile& phi_bar, double C, const std::vector<double>& lambda_grid);

// λ = 2^-m, m = 1..60, restricted to (0, 1/C].
std::vector<double> doubling_grid(double C);

// Some C in {2, 4, ..., 1024} for which doubling holds on doubling_grid(C), or 0 if none.
double doubling_constant(const Profile& phi_bar);

struct CounterexampleSequence {
  std::vector<int> j;
  std::vector<double> lambda;
  std::vector<double> ratio;  // λφ̄'/(λφ̄' - φ̄)
  std::vector<double> gamma;
  std::vector<double> eta;
  std::vector<double> xi;
  std::vector<double> predicted;  // log(λη)
  double b = 0.5;
  double eps_prime = 0.5;
  nlohmann::json to_json() const;
};

// λ_j = 2^-j for j = j_min..j_max, kept when the ratio exceeds its running maximum;
// γ = (π/4)/(λφ̄' - φ̄), η = γφ̄'(λ), 1/ξ = min(λ, η^-b, η^-1/(1+ε')).
// Throws MisuseError when φ̄ satisfies the doubling condition or fewer than two points survive.
CounterexampleSequence necessity_sequence(const Profile& phi_bar, int j_max, double b = 0.5, double eps_prime = 0.5,
                                          int j_min = 1);

// Same formulas on every j in [j_min, j_max] without the running-maximum filter or the misuse check;
// used for controls with doubling profiles.
CounterexampleSequence counterexample_grid(const Profile& phi_bar, int j_min, int j_max, double b = 0.5,
                                           double eps_prime = 0.5);

struct GrowthFit {
  std::vector<double> values;  // |reduced integral| per sequence point
  double a = 0.0;
  double c = 0.0;  // value ≈ a + c log(λη)
  bool increasing_beyond_6 = false;
  nlohmann::json to_json() const;
};

GrowthFit necessity_growth(const CounterexampleSequence& seq, const ReducedIntegralSpec& tmpl);

struct PhaseBoundResult {
  bool holds = true;
  double min_value = 0.0;
  double max_value = 0.0;
  nlohmann::json to_json() const;
};

// 0 <= η_j λ - γ_j φ̄(λ) <= π/4 on a grid of (0, λ_j] for each j.
PhaseBoundResult phase_bound_check(const Profile& phi_bar, const CounterexampleSequence& seq, int samples = 1024);

struct DichotomyReport {
  std::string verdict;  // bounded | log-growth | inconclusive
  std::string branch;   // cancellation | doubling | necessity
  double hemisphere = 0.0;  // ∫_{v·θ >= 0} Ω dσ
  double doubling_C = 0.0;
  CounterexampleSequence sequence;
  GrowthFit growth;
  double sup_value = 0.0;
  double first_value = 0.0;
  nlohmann::json to_json() const;
};

// Codimension-one geometry: with v the normal of E_ℓ₀, decides between bounded and log-growth from
// the hemisphere cancellation of K, the doubling condition of φ̄, and the reduced integrals along the
// counterexample sequence (j in [j_min, j_max]).
DichotomyReport run_dichotomy(const SurfaceSpec& surface, const CZKernel& kernel, int j_min = 4, int j_max = 14,
                              double b = 0.5, double eps_prime = 0.5);

}  // namespace czlab
