#pragma once

#include <map>
#include <span>
#include <vector>

#include <json.hpp>

namespace czlab {

using Exponent = std::vector<int>;

// Total degree ascending, then lexicographically larger exponent first.
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

class MultiPoly {
 public:
  using TermMap = std::map<Exponent, double, GradedLex>;

  explicit MultiPoly(int dim = 1);

  int dim() const { return dim_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  double coef(const Exponent& e) const;

  // Accumulates into an existing term; a term whose coefficient becomes exactly 0 is erased.
  void add_term(const Exponent& e, double c);

  double eval(std::span<const double> x) const;
  std::vector<double> grad(std::span<const double> x) const;
  // Row-major dim x dim.
  std::vector<double> hessian(std::span<const double> x) const;

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly scaled(double s) const;

  MultiPoly homogeneous_part(int deg) const;
  // Terms with total degree <= deg.
  MultiPoly truncated(int deg) const;
  // p(x) with the listed variables set to zero.
  MultiPoly restrict_zero(const std::vector<int>& axes) const;
  // q(x) = p(M x); coefficients below drop_rel * max|coef| are discarded.
  MultiPoly compose_linear(const std::vector<std::vector<double>>& M, double drop_rel = 1e-14) const;

  nlohmann::json to_json() const;
  static MultiPoly from_json(const nlohmann::json& j);

  bool operator==(const MultiPoly& o) const { return dim_ == o.dim_ && terms_ == o.terms_; }

 private:
  void check_point(std::span<const double> x) const;
  void rebuild_cache();

  int dim_;
  TermMap terms_;
  int max_exp_ = 0;
  std::vector<std::pair<Exponent, double>> flat_;
};

double poly_eval(const MultiPoly& p, std::span<const double> x);

}  // namespace czlab
