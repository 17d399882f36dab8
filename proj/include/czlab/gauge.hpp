#pragma once

#include <span>
#include <vector>

#include "czlab/multipoly.hpp"
#include "czlab/schulz.hpp"

namespace czlab {

// Polar chart on the level set {H = 1} of a positive homogeneous polynomial in r variables.
struct LevelSetChart {
  MultiPoly H{1};
  double deg = 1.0;
  // Coordinate axes of the ambient space that H depends on, in order.
  std::vector<int> axes;

  int r() const { return H.dim(); }
  // Surface density h(ω) = deg / |∇H(ω)| for ω on {H = 1}: dt = s^(r-1) h(ω) ds dσ(ω).
  double density_h(std::span<const double> omega) const;
  // Weight of the angular parametrization ω = ρ(θ)θ: h dσ = ρ(θ)^r dθ.
  double angular_weight(std::span<const double> theta) const;
};

// Reduces form.H to the pure variables.
LevelSetChart make_chart(const SchulzForm& form);

// Builds a chart from a polynomial already homogeneous of degree deg; homogeneity is verified on
// seeded samples.
LevelSetChart make_chart(const MultiPoly& H, double deg);

// ρ = H(θ)^(-1/deg) so that H(ρθ) = 1.
double gauge_radius(const LevelSetChart& chart, std::span<const double> theta);

}  // namespace czlab
