#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "czlab/schulz.hpp"
#include "czlab/surface.hpp"

namespace czlab {

// σ = (1 - ℓ₀/m)/2 with m the smallest flat exponent.
double lemma_sigma(const SchulzForm& form);

// y > 0 solving ψ(y, x) = λ^ℓ₀, with y on the single pure axis and x on the flat axes (in order).
double implicit_height(const SurfaceSpec& spec, const SchulzForm& form, const std::vector<double>& x,
                       double lambda, double rel_tol = 1e-12);

// Central-difference derivative ∂^β y(x, λ) using steps h_j per flat axis.
double implicit_height_derivative(const SurfaceSpec& spec, const SchulzForm& form, const std::vector<double>& x,
                                  double lambda, const std::vector<int>& beta, const std::vector<double>& steps);

struct Lemma1Clause {
  std::string clause;  // "1", "2", "3" or "4"
  std::vector<int> beta;
  double predicted_exponent = 0.0;
  std::vector<double> lambdas;
  std::vector<double> measured;
  std::vector<double> ratio;
  double slope = 0.0;
  bool consistent = false;
};

struct Lemma1Report {
  std::vector<int> alpha;
  double sigma = 0.0;
  std::vector<Lemma1Clause> clauses;
  bool all_consistent() const;
  nlohmann::json to_json() const;
};

// x_samples are relative: the evaluated point is x = s * λ^(ℓ₀/m + σ), |s| <= 1.
Lemma1Report lemma1_estimates(const SurfaceSpec& spec, const SchulzForm& form, const std::vector<double>& lambda_grid,
                              const std::vector<std::vector<double>>& x_samples);

}  // namespace czlab
