#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "czlab/errors.hpp"
#include "czlab/mu_k.hpp"
#include "czlab/multiplier.hpp"
#include "czlab/reduced.hpp"
#include "oracles.hpp"

using namespace czlab;

namespace {

constexpr double kPi = std::numbers::pi;

MultiplierQuery query(const nlohmann::json& surface, const std::string& phi, const std::string& kernel, double gamma,
                      std::vector<double> xi, double eps) {
  const int dim = static_cast<int>(xi.size());
  return {make_surface(surface, phi, nullptr), make_kernel({{"name", kernel}, {"dim", dim}}), gamma, std::move(xi), eps};
}

}  // namespace

TEST_CASE("dyadic annuli") {
  const auto a = dyadic_annuli(0.25);
  REQUIRE(a.size() == 2);
  CHECK(a[0] == std::array<double, 2>{0.5, 1.0});
  CHECK(a[1] == std::array<double, 2>{0.25, 0.5});
  const auto b = dyadic_annuli(0.3);
  REQUIRE(b.size() == 2);
  CHECK(b[1] == std::array<double, 2>{0.3, 0.5});
  CHECK(dyadic_annuli(0.75).size() == 1);
  CHECK(dyadic_annuli(std::ldexp(1.0, -9)).size() == 9);
  CHECK_THROWS_AS(dyadic_annuli(1.0), InputError);
  CHECK_THROWS_AS(dyadic_annuli(0.0), InputError);
}

TEST_CASE("zero parameters give zero") {
  for (const char* k : {"riesz-1", "riesz-2", "harmonic-22"}) {
    auto q = query("wwz-thm2", "power-2", k, 0.0, {0, 0, 0}, 1.0 / 64);
    CHECK(std::abs(truncated_multiplier(q)) <= 1e-6);
  }
  auto q2 = query({{"name", "wwz-alpha"}, {"alpha", 0.5}}, "identity", "riesz-1", 0.0, {0, 0}, 1.0 / 64);
  CHECK(std::abs(truncated_multiplier(q2)) <= 1e-6);
}

TEST_CASE("flat phase example matches the polar brute-force grid") {
  auto q = query("paraboloid", "zero", "riesz-1", 0.0, {3, 0, 0}, 1.0 / 64);
  const auto v = truncated_multiplier(q);
  const auto o = oracle::multiplier_dim3(q);
  CHECK(std::abs(v - o) <= 1e-3);
  // 4π ∫_ε^1 (sin 3r - 3r cos 3r) / (9 r³) dr, by the midpoint rule in log r.
  double acc = 0.0;
  const int n = 200000;
  const double a = std::log(q.eps), h = -a / n;
  for (int i = 0; i < n; ++i) {
    const double x = 3.0 * std::exp(a + (i + 0.5) * h);
    acc += 2.0 * (std::sin(x) - x * std::cos(x)) / (x * x) * h;
  }
  CHECK(std::abs(v.real()) <= 1e-6);
  CHECK(std::abs(v.imag() - 2.0 * kPi * acc) <= 1e-5);
}

TEST_CASE("planar instances match the brute-force grid") {
  for (unsigned s = 1; s <= 4; ++s) {
    const auto q = oracle::dim2_instance(s);
    CAPTURE(s);
    CHECK(std::abs(truncated_multiplier(q) - oracle::multiplier_dim2(q)) <= 1e-3);
  }
}

TEST_CASE("conjugation symmetry") {
  auto q = query("wwz-thm2", "affine-plus-square", "riesz-1", 7.0, {2.0, -1.5, 3.0}, 1.0 / 32);
  const auto v = truncated_multiplier(q);
  q.gamma = -q.gamma;
  for (auto& x : q.xi) x = -x;
  CHECK(std::abs(truncated_multiplier(q) - std::conj(v)) <= 2e-6 * 8);

  auto p = oracle::dim2_instance(3);
  const auto w = truncated_multiplier(p);
  p.gamma = -p.gamma;
  for (auto& x : p.xi) x = -x;
  CHECK(std::abs(truncated_multiplier(p) - std::conj(w)) <= 2e-6 * 8);
}

TEST_CASE("linear in the kernel") {
  auto q = query("wwz-thm2", "power-2", "riesz-2", 5.0, {1.0, 4.0, -2.0}, 1.0 / 16);
  const auto K1 = make_kernel({{"name", "riesz-2"}}), K2 = make_kernel({{"name", "harmonic-22"}});
  q.kernel = K1;
  const auto v1 = truncated_multiplier(q);
  q.kernel = K2;
  const auto v2 = truncated_multiplier(q);
  q.kernel = K1.scaled(2.0).plus(K2.scaled(-3.0));
  const auto v = truncated_multiplier(q);
  CHECK(std::abs(v - (2.0 * v1 - 3.0 * v2)) <= 2e-5);
}

TEST_CASE("annulus assembly and reproducibility") {
  auto q = query("wwz-thm2", "power-2", "riesz-3", 3.0, {1.0, 2.0, 0.5}, 1.0 / 16);
  const auto r = truncated_multiplier_detail(q);
  std::complex<double> sum = 0.0;
  for (const auto& a : r.annuli) sum += a.value;
  CHECK(sum == r.value);
  q.eps = 1.0 / 32;
  const auto h = truncated_multiplier_detail(q);
  REQUIRE(h.annuli.size() == r.annuli.size() + 1);
  for (std::size_t i = 0; i < r.annuli.size(); ++i) {
    CHECK(h.annuli[i].value == r.annuli[i].value);
    CHECK(h.annuli[i].cells == r.annuli[i].cells);
  }
  CHECK(h.value == r.value + h.annuli.back().value);
  const auto again = truncated_multiplier_detail(q);
  CHECK(again.value == h.value);
  CHECK(again.to_json().dump() == h.to_json().dump());
}

TEST_CASE("range and shape errors") {
  auto q = query("wwz-thm2", "power-2", "riesz-1", 2e6, {0, 0, 0}, 0.25);
  CHECK_THROWS_AS(truncated_multiplier(q), RangeError);
  q.gamma = 1.0;
  q.xi = {0, 1.5e6, 0};
  CHECK_THROWS_AS(truncated_multiplier(q), RangeError);
  q.xi = {0, 0};
  CHECK_THROWS_AS(truncated_multiplier(q), InputError);
  q.xi = {0, 0, 0};
  q.eps = 1.0;
  CHECK_THROWS_AS(truncated_multiplier(q), InputError);
  q.eps = 0.25;
  q.kernel = make_kernel({{"name", "riesz-1"}, {"dim", 2}});
  CHECK_THROWS_AS(truncated_multiplier(q), InputError);
}

TEST_CASE("large gamma fails fast on unresolvable annuli") {
  auto q = query("wwz-thm2", "power-2", "riesz-2", 1e6, {0, 0, 0}, std::ldexp(1.0, -12));
  const auto pred = multiplier_predicted_cells(q);
  REQUIRE(pred.size() == 12);
  CHECK(pred.front() > 200'000.0);
  CHECK(pred.back() <= 200'000.0);
  try {
    truncated_multiplier(q);
    FAIL("expected a convergence error");
  } catch (const ConvergenceError& e) {
    CHECK(std::string(e.what()).find("budget") != std::string::npos);
    CHECK(std::isfinite(std::abs(e.partial())));
  }
  const auto ann = multiplier_annuli(q, {}, false);
  REQUIRE(ann.size() == 12);
  CHECK_FALSE(ann.front().ok);
  CHECK(ann.back().ok);
  CHECK(std::abs(ann.back().value) <= 1e-5);
}

TEST_CASE("phase-variation predictions") {
  auto q = query("wwz-thm2", "power-2", "riesz-1", 0.0, {0, 0, 0}, 1.0 / 8);
  const auto calm = multiplier_predicted_cells(q);
  REQUIRE(calm.size() == 3);
  for (double c : calm) CHECK(c <= 1000.0);
  q.gamma = 1e4;
  q.eps = std::ldexp(1.0, -9);
  const auto busy = multiplier_predicted_cells(q);
  REQUIRE(busy.size() == 9);
  for (std::size_t i = 1; i < busy.size(); ++i) CHECK(busy[i] <= busy[i - 1]);
  CHECK(busy.front() > 200'000.0);

  // The wild profile has a small phase variation but an integrand the rule cannot settle.
  auto w = query("wwz-thm1", "wild-c1", "riesz-1", 1.0, {1, 1, 1}, 1.0 / 16);
  const auto ann = multiplier_annuli(w, {}, true);
  REQUIRE(ann.size() == 4);
  bool failed = false;
  for (const auto& a : ann)
    if (!a.ok) {
      failed = true;
      CHECK_FALSE(a.failure.empty());
    }
  CHECK(failed);
}

TEST_CASE("reduced integral: sine form") {
  ReducedIntegralSpec s;
  s.phi_bar = Profile::power(2.0);
  s.b = 0.0;
  CHECK(std::abs(reduced_integral(s)) == 0.0);
  // Si(η), scipy.special.sici.
  const std::vector<std::pair<double, double>> si = {{0.5, 0.49310741804306674},
                                                     {1.0, 0.9460830703671831},
                                                     {2.0, 1.605412976802695},
                                                     {kPi, 1.8519370519824658},
                                                     {10.0, 1.658347594218874},
                                                     {100.0, 1.5622254668890563}};
  for (const auto& [eta, v] : si) {
    s.eta = eta;
    const auto r = reduced_integral(s);
    CHECK(std::abs(r.real() - v) <= 1e-7);
    CHECK(std::abs(r.imag()) <= 1e-12);
    CHECK(r.real() <= 1.8519370519824658 + 1e-7);
  }
  s.eta = 5.0;
  s.b = 0.5;
  CHECK(reduced_cap(s) == doctest::Approx(1.0 / std::sqrt(5.0)));
  s.xi_cap = 10.0;
  CHECK(reduced_cap(s) == doctest::Approx(0.1));
  s.b = 1.0;
  CHECK_THROWS_AS(reduced_integral(s), InputError);
}

TEST_CASE("reduced integral: one-sided form at two tolerances") {
  ReducedIntegralSpec s;
  s.phi_bar = Profile::power(2.0);
  s.form = ReducedForm::OneSided;
  s.gamma = 1e4;
  s.eta = 1e2;
  const auto a = reduced_integral(s);
  s.tol *= 0.5;
  const auto b = reduced_integral(s);
  CHECK(std::abs(a - b) <= 1e-4);
  CHECK(std::abs(a) <= 10.0);
  s.eta = 0.5;
  CHECK_THROWS_AS(reduced_integral(s), InputError);
}

TEST_CASE("reduced integral: brute force and conjugation in gamma") {
  for (unsigned seed = 1; seed <= 4; ++seed) {
    auto s = oracle::reduced_instance(seed);
    CAPTURE(seed);
    const auto v = reduced_integral(s);
    CHECK(std::abs(v - oracle::reduced(s)) <= 1e-3);
    if (s.form != ReducedForm::Sine) continue;
    s.gamma = -s.gamma;
    CHECK(std::abs(reduced_integral(s) - std::conj(v)) <= 2.0 * s.tol);
  }
}

TEST_CASE("mu_k normalization and brute force") {
  const auto surf = make_surface(nlohmann::json{{"name", "paraboloid"}, {"dim", 2}}, nullptr, "power-2");
  const auto m = make_mu_k(surf, 3);
  CHECK(mu_k_fourier(m, {0.0, 0.0}, 0.0) == std::complex<double>(1.0, 0.0));
  for (const auto& [x, y, g] : std::vector<std::array<double, 3>>{{5, 3, 40}, {-20, 7, 300}, {60, 0, -1000}}) {
    const std::vector<double> xi = {x, y};
    CHECK(std::abs(mu_k_fourier(m, xi, g) - oracle::mu_k_dim2(surf, 1.0, 1.0, 3, xi, g)) <= 1e-4);
  }
  const auto v = mu_k_fourier(m, {7.0, -2.0}, 55.0);
  CHECK(std::abs(mu_k_fourier(m, {-7.0, 2.0}, -55.0) - std::conj(v)) <= 2e-8);
  for (unsigned seed = 1; seed <= 3; ++seed) {
    const auto inst = oracle::mu_k_instance(seed);
    const auto mk = make_mu_k(inst.surface, inst.k);
    CAPTURE(seed);
    CHECK(std::abs(mu_k_fourier(mk, inst.xi, inst.gamma) -
                   oracle::mu_k_dim2(inst.surface, inst.a, inst.c, inst.k, inst.xi, inst.gamma)) <= 1e-4);
  }
}

TEST_CASE("mu_k preconditions") {
  CHECK_THROWS_AS(make_mu_k(make_surface("wwz-thm2", nullptr, "power-2"), 3), InputError);
  const auto surf = make_surface(nlohmann::json{{"name", "paraboloid"}, {"dim", 2}}, nullptr, "power-2");
  CHECK_THROWS_AS(make_mu_k(surf, 0), InputError);
  CHECK_THROWS_AS(mu_k_fourier(make_mu_k(surf, 2), {1.0, 2.0, 3.0}, 0.0), InputError);
  CHECK(mu_chi(1.0) == 0.0);
  CHECK(mu_chi(2.0) == 0.0);
  CHECK(mu_chi(1.5) == doctest::Approx(std::exp(-4.0)));
}

TEST_CASE("mu_k small-argument constant is stable across k") {
  const auto surf = make_surface(nlohmann::json{{"name", "paraboloid"}, {"dim", 3}}, nullptr, "power-2");
  double lo = INFINITY, hi = 0.0;
  for (int k : {3, 5}) {
    const auto m = make_mu_k(surf, k);
    const auto r = small_argument_check(m, default_small_argument_grid(3));
    CHECK(std::isfinite(r.C));
    lo = std::min(lo, r.C);
    hi = std::max(hi, r.C);
    for (std::size_t i = 0; i < r.delta.size(); ++i) CHECK(r.deviation[i] <= r.C * r.delta[i] * (1 + 1e-12));
  }
  CHECK(hi / lo <= 4.0);
}

TEST_CASE("mu_k decay slopes") {
  const auto surf = make_surface(nlohmann::json{{"name", "paraboloid"}, {"dim", 2}}, nullptr, "power-2");
  const auto m = make_mu_k(surf, 4);
  const auto sp = decay_fit(m, {1.0, 0.0}, DecayMode::Spatial);
  const auto mo = decay_fit(m, {}, DecayMode::Modulated);
  CHECK(sp.used >= 3);
  CHECK(mo.used >= 3);
  CHECK(sp.slope <= -0.45);
  CHECK(mo.slope <= -0.45);
  CHECK(delta_norm(surf, 0.5, {2.0, 0.0}, 8.0) == doctest::Approx(std::sqrt(1.0 + 4.0)));
}
