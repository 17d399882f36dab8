#pragma once

#include <memory>
#include <string>

#include <json.hpp>

namespace czlab {

// Scalar profile on [0, inf): φ, φ̄, or the modulation b(·).
class Profile {
 public:
  struct Impl {
    virtual ~Impl() = default;
    virtual double value(double s) const = 0;
    virtual double deriv(double s) const = 0;
    // Upper bound on sup - inf of the profile over [a, b], 0 <= a <= b.
    virtual double osc_bound(double a, double b) const = 0;
    virtual nlohmann::json to_json() const = 0;
  };

  Profile();  // identity
  explicit Profile(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  static Profile power(double p);
  static Profile identity() { return power(1.0); }
  static Profile affine_plus_square();
  static Profile exp_flat();
  static Profile wild_c1();
  static Profile zero();
  static Profile constant(double c);
  // s -> inner(s^k), k > 0.
  static Profile compose_power(const Profile& inner, double k);

  // Accepts {"name": "power", "p": 2}, {"name": "power-2"}, or a bare string name.
  static Profile from_json(const nlohmann::json& j);

  double operator()(double s) const { return impl_->value(s); }
  double deriv(double s) const { return impl_->deriv(s); }
  double osc_bound(double a, double b) const { return impl_->osc_bound(a, b); }
  nlohmann::json to_json() const { return impl_->to_json(); }

 private:
  std::shared_ptr<const Impl> impl_;
};

}  // namespace czlab
