#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "czlab/gauge.hpp"

namespace czlab {

struct KernelTerm {
  std::string name;  // riesz-j, harmonic-22, harmonic-20, biased, constant
  double weight = 1.0;
  int index = 1;     // j for riesz-j
  double param = 0.0;  // c for biased, value for constant
  int kind = 0;        // resolved from name at kernel construction
};

// K(t) = Ω(t/|t|) |t|^(-dim) with Ω a finite combination of registered spherical functions.
class CZKernel {
 public:
  CZKernel() = default;
  CZKernel(int dim, std::vector<KernelTerm> terms, bool validate = true);

  int dim() const { return dim_; }
  const std::vector<KernelTerm>& terms() const { return terms_; }
  bool validated() const { return validated_; }
  // θ must be a unit vector of length dim.
  double omega(std::span<const double> theta) const;
  double eval(std::span<const double> t) const;
  nlohmann::json to_json() const;

  // Same kernel with every weight multiplied by s (used to check linearity in Ω).
  CZKernel scaled(double s) const;
  CZKernel plus(const CZKernel& o) const;

 private:
  int dim_ = 3;
  std::vector<KernelTerm> terms_;
  bool validated_ = false;
};

// {"name": "riesz-1", "dim": 3}, {"name": "combo", "dim": 3, "terms": [...]}, optional "c" for
// biased, optional "validate": false.
CZKernel make_kernel(const nlohmann::json& j);

// ∫_{S^(dim-1)} f dσ with the product rule (circle: trapezoid; sphere: azimuth trapezoid x
// Gauss-Legendre in cos polar), doubled until two levels agree within tol.
double sphere_integral(int dim, const std::function<double(std::span<const double>)>& f, double tol = 1e-8);

// ∫_{v·θ >= 0} f dσ, in a frame with v as the pole.
double hemisphere_sphere_integral(int dim, std::span<const double> v,
                                  const std::function<double(std::span<const double>)>& f, double tol = 1e-8);

double annulus_integral(const CZKernel& K, double a, double b);
double hemisphere_integral(const CZKernel& K, std::span<const double> v, double a, double b);

struct TailFit {
  std::vector<double> Z;
  std::vector<double> values;
  double extrapolated = 0.0;
  // Difference between the extrapolations from the first and last five levels.
  double spread = 0.0;
  nlohmann::json to_json() const;
};

// Values at Z = 8, 16, ..., 256 extrapolated to Z = ∞ by polynomial interpolation in 1/Z.
TailFit extrapolate_tail(const std::vector<double>& Z, const std::vector<double>& values);

// ∫_{H=1} ∫_{|z|<=Z} K(ω, z) h(ω) dz dω, truncated at |z| = Z and extrapolated in Z.
TailFit levelset_cancellation_detail(const CZKernel& K, const LevelSetChart& chart);
double levelset_cancellation(const CZKernel& K, const LevelSetChart& chart);

struct FlattenCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  TailFit lhs_fit;
  nlohmann::json to_json() const;
};

// lhs: ∫_{R²} K(x, 1) dx over discs |x| <= Z, extrapolated in Z;
// rhs: ∫_{θ₃ >= 0} Ω dσ (the radial projection carries K dx onto Ω dσ with unit density).
FlattenCheck flatten_identity_check(const CZKernel& K);

}  // namespace czlab
