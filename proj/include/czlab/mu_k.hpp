#pragma once

#include <complex>
#include <vector>

#include <json.hpp>

#include "czlab/gauge.hpp"
#include "czlab/schulz.hpp"
#include "czlab/surface.hpp"

namespace czlab {

// χ(s) = exp(-1/((s-1)(2-s))) on (1, 2), zero elsewhere.
double mu_chi(double s);

// Dyadic measure 2^{k·dim} χ(2^k‖t‖) dt on the graph of φ∘ψ, ‖t‖ the gauge of P(ω) = 1.
struct MuKMeasure {
  SurfaceSpec surface;
  SchulzForm form;
  LevelSetChart chart;
  int k = 1;
  double mass = 1.0;  // unnormalized total mass, divided out of every transform
  double tol = 1e-8;  // relative to the total mass
  double abs_tol = 1e-8;  // tol times the mass, fixed at construction so μ̂_k(0, 0) = 1 exactly
  long max_cells = 400'000;
};

// Requires E_ℓ₀ = {0} (no flat directions) and a polynomial ψ.
MuKMeasure make_mu_k(const SurfaceSpec& surface, int k, double tol = 1e-8);

std::complex<double> mu_k_fourier(const MuKMeasure& m, const std::vector<double>& xi, double gamma);

// |δ(s)(ξ, γ)| = |(sξ, φ̄(s)γ)|.
double delta_norm(const SurfaceSpec& surface, double s, const std::vector<double>& xi, double gamma);

struct DecayFit {
  std::vector<double> delta;  // |δ(2^{-k-1})(ξ, γ)| along the ray
  std::vector<double> values;
  double slope = 0.0;
  int used = 0;  // points above the quadrature noise floor entering the fit
  nlohmann::json to_json() const;
};

enum class DecayMode { Spatial, Modulated };

// Evaluates |μ̂_k| on the ray |δ(2^{-k-1})| = 1, 2, ..., 32 and fits log|μ̂_k| against log|δ|.
DecayFit decay_fit(const MuKMeasure& m, const std::vector<double>& direction, DecayMode mode,
                   const std::vector<double>& magnitudes = {1, 2, 4, 8, 16, 32});

struct SmallArgumentResult {
  double C = 0.0;
  std::vector<double> delta;
  std::vector<double> deviation;  // |μ̂_k - 1|
  nlohmann::json to_json() const;
};

// grid: points (a, b) in δ(2^{-k+3})-scaled coordinates, so ξ = a / 2^{-k+3} and γ = b / φ̄(2^{-k+3}).
// Points with |δ| = 0 are skipped. Returns max |μ̂_k - 1| / |δ|.
SmallArgumentResult small_argument_check(const MuKMeasure& m, const std::vector<std::vector<double>>& grid);

// A fixed grid with |δ| in {1/8, 1/4, 1/2, 1} along coordinate and diagonal directions.
std::vector<std::vector<double>> default_small_argument_grid(int dim);

}  // namespace czlab
