#include "czlab/profiles.hpp"

#include <cmath>

#include "czlab/errors.hpp"

namespace czlab {

namespace {

struct Monotone : Profile::Impl {
  double osc_bound(double a, double b) const override { return std::abs(value(b) - value(a)); }
};

struct Power : Monotone {
  double p;
  explicit Power(double p_) : p(p_) {}
  double value(double s) const override { return s <= 0.0 ? 0.0 : std::pow(s, p); }
  double deriv(double s) const override {
    if (p == 1.0) return 1.0;
    return s <= 0.0 ? 0.0 : p * std::pow(s, p - 1.0);
  }
  nlohmann::json to_json() const override { return {{"name", "power"}, {"p", p}}; }
};

struct AffinePlusSquare : Monotone {
  double value(double s) const override { return s + s * s; }
  double deriv(double s) const override { return 1.0 + 2.0 * s; }
  nlohmann::json to_json() const override { return {{"name", "affine-plus-square"}}; }
};

struct ExpFlat : Monotone {
  double value(double s) const override { return s <= 0.0 ? 0.0 : std::exp(-1.0 / s); }
  double deriv(double s) const override { return s <= 0.0 ? 0.0 : std::exp(-1.0 / s) / (s * s); }
  nlohmann::json to_json() const override { return {{"name", "exp-flat"}}; }
};

struct WildC1 : Profile::Impl {
  double value(double u) const override { return u == 0.0 ? 0.0 : u * std::sin(1.0 / u); }
  double deriv(double u) const override {
    return u == 0.0 ? 0.0 : std::sin(1.0 / u) - std::cos(1.0 / u) / u;
  }
  // |φ(u)| <= |u| and |φ'(u)| <= 1 + 1/u on [a, b].
  double osc_bound(double a, double b) const override {
    const double global = 2.0 * std::max(std::abs(a), std::abs(b));
    if (a <= 0.0) return global;
    return std::min(global, (1.0 + 1.0 / a) * (b - a));
  }
  nlohmann::json to_json() const override { return {{"name", "wild-c1"}}; }
};

struct Constant : Profile::Impl {
  double c;
  explicit Constant(double c_) : c(c_) {}
  double value(double) const override { return c; }
  double deriv(double) const override { return 0.0; }
  double osc_bound(double, double) const override { return 0.0; }
  nlohmann::json to_json() const override {
    if (c == 0.0) return {{"name", "zero"}};
    return {{"name", "constant"}, {"value", c}};
  }
};

struct ComposePower : Profile::Impl {
  Profile inner;
  double k;
  ComposePower(Profile in, double k_) : inner(std::move(in)), k(k_) {}
  double value(double s) const override { return inner(s <= 0.0 ? 0.0 : std::pow(s, k)); }
  double deriv(double s) const override {
    if (k == 1.0) return inner.deriv(s);
    // At 0 the chain rule is 0 * inf for k < 1; the limit is taken at the smallest normal scale.
    const double x = s <= 0.0 ? 1e-300 : s;
    return inner.deriv(std::pow(x, k)) * k * std::pow(x, k - 1.0);
  }
  double osc_bound(double a, double b) const override {
    return inner.osc_bound(a <= 0.0 ? 0.0 : std::pow(a, k), b <= 0.0 ? 0.0 : std::pow(b, k));
  }
  nlohmann::json to_json() const override {
    return {{"name", "composed"}, {"inner", inner.to_json()}, {"power", k}};
  }
};

}  // namespace

Profile::Profile() : impl_(std::make_shared<Power>(1.0)) {}

Profile Profile::power(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("power profile requires p >= 1");
  return Profile(std::make_shared<Power>(p));
}
Profile Profile::affine_plus_square() { return Profile(std::make_shared<AffinePlusSquare>()); }
Profile Profile::exp_flat() { return Profile(std::make_shared<ExpFlat>()); }
Profile Profile::wild_c1() { return Profile(std::make_shared<WildC1>()); }
Profile Profile::zero() { return Profile(std::make_shared<Constant>(0.0)); }
Profile Profile::constant(double c) {
  if (!std::isfinite(c)) throw InputError("constant profile: non-finite value");
  return Profile(std::make_shared<Constant>(c));
}
Profile Profile::compose_power(const Profile& inner, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw InputError("compose_power: exponent must be positive");
  if (k == 1.0) return inner;
  return Profile(std::make_shared<ComposePower>(inner, k));
}

Profile Profile::from_json(const nlohmann::json& j) {
  try {
    if (j.is_string()) return from_json(nlohmann::json{{"name", j.get<std::string>()}});
    const std::string name = j.at("name").get<std::string>();
    if (name == "power") return power(j.at("p").get<double>());
    if (name.rfind("power-", 0) == 0) {
      std::size_t used = 0;
      const std::string tail = name.substr(6);
      const double p = std::stod(tail, &used);
      if (used != tail.size()) throw InputError("bad power profile name: " + name);
      return power(p);
    }
    if (name == "identity") return identity();
    if (name == "affine-plus-square") return affine_plus_square();
    if (name == "exp-flat") return exp_flat();
    if (name == "wild-c1") return wild_c1();
    if (name == "zero") return zero();
    if (name == "constant") return constant(j.at("value").get<double>());
    if (name == "composed") return compose_power(from_json(j.at("inner")), j.at("power").get<double>());
    throw InputError("unknown profile: " + name);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("profile JSON: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw InputError("profile JSON: malformed power exponent");
  }
}

}  // namespace czlab
