#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "czlab/cap_measure.hpp"
#include "czlab/errors.hpp"
#include "czlab/gauge.hpp"
#include "czlab/implicit_height.hpp"
#include "czlab/ladder.hpp"
#include "czlab/schulz.hpp"
#include "czlab/surface.hpp"

using namespace czlab;

namespace {

constexpr double kPi = std::numbers::pi;

MultiPoly poly(int dim, std::initializer_list<std::pair<Exponent, double>> terms) {
  MultiPoly p(dim);
  for (const auto& [e, c] : terms) p.add_term(e, c);
  return p;
}

// ψ = |t|, whose level set is the unit circle.
class Circle : public SurfaceFunction {
 public:
  int dim() const override { return 2; }
  double value(std::span<const double> x) const override { return std::hypot(x[0], x[1]); }
  void gradient(std::span<const double> x, std::span<double> g) const override {
    const double r = std::hypot(x[0], x[1]);
    g[0] = x[0] / r;
    g[1] = x[1] / r;
  }
  void hessian(std::span<const double> x, std::span<double> h) const override {
    const double r = std::hypot(x[0], x[1]);
    const double r3 = r * r * r;
    h[0] = x[1] * x[1] / r3;
    h[1] = h[2] = -x[0] * x[1] / r3;
    h[3] = x[0] * x[0] / r3;
  }
  bool is_gauge() const override { return true; }
  nlohmann::json to_json() const override { return {{"name", "circle"}}; }
};

bool contained(const std::vector<std::vector<double>>& inner, const std::vector<std::vector<double>>& outer) {
  for (const auto& v : inner) {
    double rem = 0.0, n2 = 0.0;
    std::vector<double> r(v);
    for (const auto& b : outer) {
      double p = 0.0;
      for (std::size_t i = 0; i < v.size(); ++i) p += v[i] * b[i];
      for (std::size_t i = 0; i < v.size(); ++i) r[i] -= p * b[i];
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      rem += r[i] * r[i];
      n2 += v[i] * v[i];
    }
    if (rem > 1e-20 * n2) return false;
  }
  return true;
}

void check_ladder_nesting(const FlatnessLadder& L) {
  REQUIRE(!L.levels.empty());
  CHECK(L.levels.front().ell == 1);
  CHECK(L.levels.front().basis.size() == static_cast<std::size_t>(L.dim));
  CHECK(L.levels.back().basis.empty());
  for (std::size_t i = 1; i < L.levels.size(); ++i) {
    CHECK(L.levels[i].ell == L.levels[i - 1].ell + 1);
    CHECK(contained(L.levels[i].basis, L.levels[i - 1].basis));
  }
}

}  // namespace

TEST_CASE("flatness ladder of the reference surfaces") {
  const FlatnessLadder a = flatness_ladder(registry_polynomial("wwz-thm1", 3));
  CHECK(a.ell0 == 2);
  CHECK(a.codim == 2);
  CHECK_FALSE(a.normal_v.has_value());
  REQUIRE(a.levels.size() >= 2);
  CHECK(a.levels[1].basis == std::vector<std::vector<double>>{{0, 0, 1}});
  check_ladder_nesting(a);

  const FlatnessLadder b = flatness_ladder(registry_polynomial("wwz-thm2", 3));
  CHECK(b.ell0 == 2);
  CHECK(b.codim == 1);
  REQUIRE(b.normal_v.has_value());
  CHECK(*b.normal_v == std::vector<double>{1, 0, 0});
  CHECK(b.levels[1].basis == std::vector<std::vector<double>>{{0, 1, 0}, {0, 0, 1}});
  check_ladder_nesting(b);

  const FlatnessLadder c = flatness_ladder(registry_polynomial("paraboloid", 3));
  CHECK(c.ell0 == 2);
  CHECK(c.codim == 3);
  CHECK(c.levels[1].basis.empty());
  check_ladder_nesting(c);
}

TEST_CASE("ladder json round trip") {
  const FlatnessLadder b = flatness_ladder(registry_polynomial("wwz-thm2", 3));
  CHECK(FlatnessLadder::from_json(b.to_json()) == b);
}

TEST_CASE("ladder errors") {
  // x² + y²: z is flat at every order.
  CHECK_THROWS_AS(flatness_ladder(poly(3, {{{2, 0, 0}, 1.0}, {{0, 2, 0}, 1.0}})), FiniteTypeError);
  // (x - y)² + y⁴ has the flat direction (1, 1) at order 2, off the axes.
  const MultiPoly tilted = poly(2, {{{2, 0}, 1.0}, {{1, 1}, -2.0}, {{0, 2}, 1.0}, {{0, 4}, 1.0}, {{4, 0}, 1.0}});
  CHECK_THROWS_AS(flatness_ladder(tilted), OrientationError);
}

TEST_CASE("nesting holds on seeded axis-aligned surfaces") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> half_order(1, 3);
  std::uniform_real_distribution<double> coef(0.5, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    MultiPoly p(3);
    for (int i = 0; i < 3; ++i) {
      Exponent e(3, 0);
      e[i] = 2 * half_order(rng);
      p.add_term(e, coef(rng));
    }
    const FlatnessLadder L = flatness_ladder(p);
    check_ladder_nesting(L);
    int lowest = 100;
    for (const auto& [e, c] : p.terms())
      for (int v : e) lowest = v > 0 ? std::min(lowest, v) : lowest;
    CHECK(L.ell0 == lowest);
  }
}

TEST_CASE("Schulz decomposition classifies by grading") {
  const MultiPoly thm2 = registry_polynomial("wwz-thm2", 3);
  const SchulzForm f = schulz_decompose(thm2, flatness_ladder(thm2));
  CHECK(f.r == 1);
  CHECK(f.m == std::vector<int>{4, 4});
  CHECK(f.P1.is_zero());
  CHECK(f.R.is_zero());
  CHECK(f.pure == thm2);

  const MultiPoly a = poly(2, {{{2, 0}, 1.0}, {{0, 4}, 1.0}, {{1, 2}, 0.5}});
  const SchulzForm fa = schulz_decompose(a, flatness_ladder(a));
  CHECK(fa.P1.coef({1, 2}) == 0.5);
  CHECK(fa.grading({1, 2}) == Rational::make(1, 1));

  const MultiPoly b = poly(2, {{{2, 0}, 1.0}, {{0, 4}, 1.0}, {{2, 2}, 1.0}});
  const SchulzForm fb = schulz_decompose(b, flatness_ladder(b));
  CHECK(fb.R.coef({2, 2}) == 1.0);
  CHECK(fb.grading({2, 2}) == Rational::make(3, 2));
}

TEST_CASE("Schulz reconstruction and grading exactness") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> coef(0.05, 0.3);
  const std::vector<Exponent> extras = {{1, 2, 0}, {1, 0, 2}, {2, 2, 0}, {0, 2, 2}, {2, 0, 2}, {1, 2, 2}, {0, 3, 3}};
  for (int trial = 0; trial < 20; ++trial) {
    MultiPoly p = registry_polynomial("wwz-thm2", 3);
    for (const auto& e : extras)
      if (rng() % 2) p.add_term(e, coef(rng));
    SchulzForm f;
    try {
      f = schulz_decompose(p, flatness_ladder(p));
    } catch (const NormalFormError&) {
      continue;
    }
    CHECK(f.pure + f.P1 + f.R == p);
    for (const auto& [e, c] : f.P1.terms()) CHECK(f.grading(e) == Rational::make(1, 1));
    for (const auto& [e, c] : f.R.terms()) CHECK(f.grading(e) > Rational::make(1, 1));
  }
}

TEST_CASE("Schulz decomposition errors") {
  const MultiPoly neg = poly(2, {{{2, 0}, -1.0}, {{0, 4}, 1.0}});
  CHECK_THROWS_AS(schulz_decompose(neg, flatness_ladder(registry_polynomial("paraboloid", 2))), ConvexityError);
  // x y is of grading 1/2 + 1/4 < 1.
  const MultiPoly low = poly(2, {{{2, 0}, 1.0}, {{0, 4}, 1.0}, {{1, 1}, 0.1}});
  CHECK_THROWS(schulz_decompose(low, flatness_ladder(low)));
}

TEST_CASE("gauge radius examples and consistency") {
  const LevelSetChart circ = make_chart(poly(2, {{{2, 0}, 1.0}, {{0, 2}, 1.0}}), 2.0);
  const double e1[2] = {1, 0};
  const double diag[2] = {std::sqrt(0.5), std::sqrt(0.5)};
  CHECK(gauge_radius(circ, e1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gauge_radius(circ, diag) == doctest::Approx(1.0).epsilon(1e-15));
  const LevelSetChart ell = make_chart(poly(2, {{{2, 0}, 2.0}, {{0, 2}, 1.0}}), 2.0);
  CHECK(gauge_radius(ell, e1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

  const LevelSetChart quartic = make_chart(poly(2, {{{4, 0}, 1.0}, {{2, 2}, 0.5}, {{0, 4}, 2.0}}), 4.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  for (int i = 0; i < 1000; ++i) {
    const double a = ang(rng);
    const double th[2] = {std::cos(a), std::sin(a)};
    for (const LevelSetChart* ch : {&circ, &ell, &quartic}) {
      const double rho = gauge_radius(*ch, th);
      const double p[2] = {rho * th[0], rho * th[1]};
      CHECK(std::abs(ch->H.eval(p) - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("gauge charts reject bad input") {
  const LevelSetChart degenerate = make_chart(poly(2, {{{2, 0}, 1.0}}), 2.0);
  const double e2[2] = {0, 1};
  CHECK_THROWS_AS(gauge_radius(degenerate, e2), DegenerateDirectionError);
  CHECK_THROWS(make_chart(poly(2, {{{2, 0}, 1.0}, {{0, 4}, 1.0}}), 2.0));
}

TEST_CASE("chart from a Schulz form") {
  const MultiPoly p = registry_polynomial("wwz-thm1", 3);
  const SchulzForm f = schulz_decompose(p, flatness_ladder(p));
  const LevelSetChart ch = make_chart(f);
  CHECK(ch.r() == 2);
  CHECK(ch.axes == std::vector<int>{0, 1});
  // h dσ = ρ^r dθ for the unit circle is 1.
  const double th[2] = {0.6, 0.8};
  CHECK(ch.angular_weight(th) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("implicit height examples") {
  const SurfaceSpec s = make_surface({{"poly", poly(2, {{{2, 0}, 1.0}, {{0, 4}, 1.0}}).to_json()}});
  const SchulzForm f = schulz_decompose(*s.poly(), flatness_ladder(*s.poly()));
  for (double lam : {0.01, 0.1, 0.5, 1.0}) CHECK(implicit_height(s, f, {0.0}, lam) == doctest::Approx(lam).epsilon(1e-12));
  CHECK(implicit_height(s, f, {0.1}, 0.5) == doctest::Approx(std::sqrt(0.25 - 1e-4)).epsilon(1e-12));

  const SurfaceSpec s4 = make_surface({{"poly", poly(2, {{{2, 0}, 4.0}, {{0, 4}, 1.0}}).to_json()}});
  const SchulzForm f4 = schulz_decompose(*s4.poly(), flatness_ladder(*s4.poly()));
  CHECK(implicit_height(s4, f4, {0.0}, 0.5) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK_THROWS_AS(implicit_height(s, f, {0.9}, 0.5), GeometryError);
}

TEST_CASE("implicit height residual and leading behaviour") {
  // 3y² + x⁴ + 2z⁴ + 0.5(x² + z²)²
  const MultiPoly p = poly(3, {{{2, 0, 0}, 3.0}, {{0, 4, 0}, 1.5}, {{0, 0, 4}, 2.5}, {{0, 2, 2}, 1.0}});
  const SurfaceSpec s = make_surface({{"poly", p.to_json()}});
  const SchulzForm f = schulz_decompose(p, flatness_ladder(p));
  const double sigma = lemma_sigma(f);
  CHECK(sigma == doctest::Approx(0.25));
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 1; k <= 12; ++k) {
    const double lam = std::ldexp(1.0, -k);
    const double rad = std::pow(lam, 0.5 + sigma);
    for (int i = 0; i < 10; ++i) {
      const std::vector<double> x = {u(rng) * rad / std::sqrt(2.0), u(rng) * rad / std::sqrt(2.0)};
      const double y = implicit_height(s, f, x, lam);
      const double pt[3] = {y, x[0], x[1]};
      CHECK(std::abs(p.eval(pt) - lam * lam) <= 1e-10 * lam * lam);
    }
  }
  // y(0, λ)/λ → A^{-1/ℓ₀} monotonically.
  const double limit = std::pow(3.0, -0.5);
  double prev_gap = INFINITY;
  for (int k = 4; k <= 20; ++k) {
    const double lam = std::ldexp(1.0, -k);
    const double gap = std::abs(implicit_height(s, f, {0.0, 0.0}, lam) / lam - limit);
    CHECK(gap <= prev_gap + 1e-14);
    prev_gap = gap;
  }
  CHECK(prev_gap <= 1e-8);
}

TEST_CASE("implicit-height derivative estimates on y² + x⁴") {
  const SurfaceSpec s = make_surface({{"poly", poly(2, {{{2, 0}, 1.0}, {{0, 4}, 1.0}}).to_json()}});
  const SchulzForm f = schulz_decompose(*s.poly(), flatness_ladder(*s.poly()));
  std::vector<double> lams;
  for (int k = 6; k <= 14; ++k) lams.push_back(std::ldexp(1.0, -k));
  const Lemma1Report rep = lemma1_estimates(s, f, lams, {{0.0}, {0.5}, {-0.5}, {1.0}});
  CHECK(rep.alpha == std::vector<int>{4});
  CHECK(rep.all_consistent());
  const Lemma1Report at0 = lemma1_estimates(s, f, lams, {{0.0}});
  bool saw_fourth = false;
  for (const auto& c : at0.clauses) {
    if (c.clause == "2" && c.beta == std::vector<int>{4}) {
      saw_fourth = true;
      CHECK(c.predicted_exponent == doctest::Approx(-1.0));
      CHECK(c.slope == doctest::Approx(-1.0).epsilon(0.1));
    }
  }
  CHECK(saw_fourth);

  // ∂y/∂x vanishes at x = 0 and is small relative to λ^{1/2} at |x| = λ^{3/4}/2.
  const double lam = 1.0 / 64;
  const double h = std::sqrt(lam) / 64;
  CHECK(std::abs(implicit_height_derivative(s, f, {0.0}, lam, {1}, {h})) <= 1e-9);
  const double x = 0.5 * std::pow(lam, 0.75);
  // Closed form: y' = -2x³/√(λ² - x⁴).
  const double exact = -2 * x * x * x / std::sqrt(lam * lam - std::pow(x, 4));
  const double fd = implicit_height_derivative(s, f, {x}, lam, {1}, {h});
  CHECK(fd == doctest::Approx(exact).epsilon(1e-5));
  CHECK(std::abs(fd) <= 0.25 * std::sqrt(lam));
}

TEST_CASE("surface registry validation") {
  CHECK_THROWS_AS(make_surface_function(nlohmann::json{{"name", "no-such-surface"}}), InputError);
  CHECK_THROWS_AS(make_surface_function({{"poly", poly(2, {{{1, 0}, 1.0}, {{0, 2}, 1.0}}).to_json()}}), InputError);
  CHECK_THROWS_AS(make_surface_function({{"poly", poly(2, {{{2, 0}, 1.0}, {{0, 2}, -1.0}}).to_json()}}),
                  ConvexityError);
  const ConvexityReport rep = convexity_check(*make_surface_function("wwz-thm1"));
  CHECK(rep.convex);
  CHECK(rep.samples > 1000);
  // A rotation by 90 degrees about z swaps the roles of x and y.
  const nlohmann::json rot = {{"name", "wwz-thm2"}, {"rotation", {{0, 1, 0}, {-1, 0, 0}, {0, 0, 1}}}};
  const auto psi = make_surface_function(rot);
  const FlatnessLadder L = flatness_ladder(*psi->polynomial());
  CHECK(*L.normal_v == std::vector<double>{0, 1, 0});
}

TEST_CASE("profiles of a surface") {
  const SurfaceSpec s = make_surface("wwz-thm2", nullptr, "affine-plus-square");
  REQUIRE(s.phi_bar.has_value());
  for (double u : {0.01, 0.2, 0.7}) {
    CHECK(s.phi(u) == doctest::Approx(std::sqrt(u) + u).epsilon(1e-14));
    CHECK((*s.phi_bar)(u) == doctest::Approx(u + u * u).epsilon(1e-14));
  }
  const SurfaceSpec w = make_surface("wwz-thm1", "wild-c1");
  CHECK(w.phi(0.0) == 0.0);
  CHECK(w.phi(0.1) == doctest::Approx(0.1 * std::sin(10.0)));
  CHECK_THROWS_AS(make_surface("wwz-thm1", "power-2", "power-2"), InputError);
}

TEST_CASE("cap measure on the unit circle") {
  const auto circle = std::make_shared<const Circle>();
  const CapMeasureContext ctx = make_cap_context(circle, 0.3);
  CHECK(cap_measure(ctx, 2.5) == doctest::Approx(2 * kPi).epsilon(1e-6));
  CHECK(cap_measure(ctx, 0.02) == doctest::Approx(2 * std::acos(1 - 0.02)).epsilon(1e-4));
  for (int k = 8; k <= 16; k += 4) {
    const double e = std::ldexp(1.0, -k);
    CHECK(cap_measure(ctx, e) / std::sqrt(e) == doctest::Approx(2 * std::sqrt(2.0)).epsilon(2e-3));
  }
  CHECK_THROWS_AS(cap_measure(ctx, 0.0), InputError);
}

TEST_CASE("cap measure is nondecreasing in eps") {
  for (const nlohmann::json& c : {nlohmann::json{{"name", "wwz-alpha"}, {"alpha", 0.5}},
                                  nlohmann::json{{"name", "wwz-alpha"}, {"alpha", 1.5}}}) {
    const CapMeasureContext ctx = make_cap_context(make_surface_function(c), 0.5 * kPi);
    double prev = 0.0;
    for (int k = 24; k >= 0; --k) {
      const double v = cap_measure(ctx, std::ldexp(1.0, -k));
      CHECK(v >= prev * (1 - 1e-4));
      prev = v;
    }
  }
}

TEST_CASE("alpha curve is a convex C2 gauge") {
  for (double alpha : {0.5, 1.5}) {
    const AlphaCurve a(alpha);
    // Degree-1 homogeneity.
    const double p[2] = {0.1, 0.9}, q[2] = {0.3, 2.7};
    CHECK(a.value(q) == doctest::Approx(3 * a.value(p)).epsilon(1e-12));
    // Value and slope match the circular branch at |x| = |y|/2.
    for (double eps : {1e-7}) {
      const double lo[2] = {0.5 - eps, 1.0}, hi[2] = {0.5 + eps, 1.0};
      CHECK(a.value(lo) == doctest::Approx(a.value(hi)).epsilon(1e-6));
      double gl[2], gh[2];
      a.gradient(lo, gl);
      a.gradient(hi, gh);
      CHECK(gl[0] == doctest::Approx(gh[0]).epsilon(1e-5));
    }
    CHECK(a.G(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(convexity_check(a).convex);
  }
}

TEST_CASE("theorem 5 increments on the circle decay geometrically") {
  const auto circle = std::make_shared<const Circle>();
  const Theorem5Report rep = theorem5_integrability(circle, {0.0, 1.0, 2.0}, std::ldexp(1.0, -16));
  // |E| ~ 2√(2ε) gives increments with ratio 2^{-1/2}.
  REQUIRE(rep.ratios.size() >= 10);
  for (std::size_t k = 4; k < rep.ratios.size(); ++k) CHECK(rep.ratios[k] == doctest::Approx(std::sqrt(0.5)).epsilon(0.02));
  CHECK(std::isfinite(rep.sup_integral));
}
