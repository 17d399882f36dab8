#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "czlab/multipoly.hpp"
#include "czlab/profiles.hpp"

namespace czlab {

class SurfaceFunction {
 public:
  virtual ~SurfaceFunction() = default;
  virtual int dim() const = 0;
  virtual double value(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> g) const = 0;
  // Row-major dim x dim.
  virtual void hessian(std::span<const double> x, std::span<double> h) const = 0;
  virtual const MultiPoly* polynomial() const { return nullptr; }
  // True for gauges (homogeneous of degree 1), which are not differentiable at the origin.
  virtual bool is_gauge() const { return false; }
  virtual nlohmann::json to_json() const = 0;
};

class PolySurface : public SurfaceFunction {
 public:
  explicit PolySurface(MultiPoly p) : p_(std::move(p)) {}
  int dim() const override { return p_.dim(); }
  double value(std::span<const double> x) const override { return p_.eval(x); }
  void gradient(std::span<const double> x, std::span<double> g) const override;
  void hessian(std::span<const double> x, std::span<double> h) const override;
  const MultiPoly* polynomial() const override { return &p_; }
  nlohmann::json to_json() const override { return {{"poly", p_.to_json()}}; }

 private:
  MultiPoly p_;
};

// Convex gauge ψ(x, y) = |y| G(x/|y|) for |x| <= |y|/2 and √(x²+y²) + b|x| otherwise. G is even
// with G(0) = 1, and its second derivative blends c·exp(-(√(1+u⁻²))^α) (u <= 1/4) into the
// circle's (1+u²)^(-3/2) (u >= 1/2) with a quintic smoothstep. c and b make the two branches
// join with matching value and slope, so ψ is C² away from the origin.
class AlphaCurve : public SurfaceFunction {
 public:
  explicit AlphaCurve(double alpha);
  int dim() const override { return 2; }
  double value(std::span<const double> x) const override;
  void gradient(std::span<const double> x, std::span<double> g) const override;
  void hessian(std::span<const double> x, std::span<double> h) const override;
  bool is_gauge() const override { return true; }
  nlohmann::json to_json() const override { return {{"name", "wwz-alpha"}, {"alpha", alpha_}}; }

  double alpha() const { return alpha_; }
  double flat_coefficient() const { return c_; }
  double slope_offset() const { return b_; }
  // Profile G on u in [0, 1/2] and its derivatives.
  double G(double u) const;
  double G1(double u) const;
  double G2(double u) const;

 private:
  double flat(double u) const;
  double blend_weight(double u) const;

  double alpha_;
  double c_ = 0.0;
  double b_ = 0.0;
  double h_ = 0.0;
  std::vector<double> g0_, g1_;
};

struct SurfaceSpec {
  std::string name;
  std::shared_ptr<const SurfaceFunction> psi;
  Profile phi;
  std::optional<Profile> phi_bar;

  int dim() const { return psi->dim(); }
  const MultiPoly* poly() const { return psi->polynomial(); }
  double eval(std::span<const double> x) const { return psi->value(x); }
  nlohmann::json to_json() const;
};

struct ConvexityReport {
  bool convex = true;
  double min_eigenvalue = 0.0;
  std::vector<double> witness;
  long samples = 0;
};

// Hessian PSD check on the 17^dim grid of the unit ball plus 1000 seeded random points.
ConvexityReport convexity_check(const SurfaceFunction& psi, double eig_tol = 1e-9);

// Registry ("paraboloid", "wwz-thm1", "wwz-thm2", "wwz-alpha") or inline {"poly": ...}, with an
// optional orthogonal "rotation" matrix pre-composed with ψ. Validates ψ(0) = 0, ∇ψ(0) = 0 and
// convexity.
std::shared_ptr<const SurfaceFunction> make_surface_function(const nlohmann::json& j, std::string* name = nullptr);

// Builds the surface; φ comes from "phi", or from "phi_bar" via φ(u) = φ̄(u^(1/ℓ₀)) when the
// ladder is computable. φ̄ is materialized whenever ℓ₀ is known.
SurfaceSpec make_surface(const nlohmann::json& surface, const nlohmann::json& phi = nullptr,
                         const nlohmann::json& phi_bar = nullptr);

MultiPoly registry_polynomial(const std::string& name, int dim);

}  // namespace czlab
