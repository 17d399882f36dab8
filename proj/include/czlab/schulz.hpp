#pragma once

#include <compare>
#include <vector>

#include <json.hpp>

#include "czlab/ladder.hpp"
#include "czlab/multipoly.hpp"

namespace czlab {

struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational make(long long n, long long d);
  Rational operator+(const Rational& o) const;
  std::strong_ordering operator<=>(const Rational& o) const;
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
  nlohmann::json to_json() const { return {{"num", num}, {"den", den}}; }
};

struct SchulzForm {
  int dim = 0;
  int ell0 = 0;
  int r = 0;
  std::vector<int> pure_axes;       // axes carrying t_j^ell0, in coordinate order
  std::vector<int> flat_axes;       // remaining axes, in coordinate order
  std::vector<int> m;               // m_j per flat axis
  std::vector<double> coeff_pure;   // a_j of t_j^ell0 per pure axis
  std::vector<double> coeff_flat;   // coefficient of t_j^m_j per flat axis
  MultiPoly pure{1};
  MultiPoly P1{1};
  MultiPoly R{1};
  MultiPoly H{1};                   // in all dim variables; depends only on the pure axes
  std::vector<std::pair<Exponent, Rational>> gradings;

  MultiPoly P() const { return pure + P1; }
  Rational grading(const Exponent& e) const;
  nlohmann::json to_json() const;
};

SchulzForm schulz_decompose(const MultiPoly& psi, const FlatnessLadder& ladder);

// For r = 1: per flat axis j, the smallest power of x_j among grading-1 monomials that involve
// only x_j and the pure variable (the pure power x_j^m_j included).
std::vector<int> lemma_alpha(const SchulzForm& form);

}  // namespace czlab
