// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "czlab/cap_measure.hpp"
#include "czlab/commands.hpp"
#include "czlab/determinant.hpp"
#include "czlab/errors.hpp"
#include "czlab/experiments.hpp"
#include "czlab/gauge.hpp"
#include "czlab/implicit_height.hpp"
#include "czlab/kernel.hpp"
#include "czlab/ladder.hpp"
#include "czlab/mu_k.hpp"
#include "czlab/multiplier.hpp"
#include "czlab/reduced.hpp"
#include "czlab/schulz.hpp"
#include "czlab/sweep.hpp"
#include "oracles.hpp"

using namespace czlab;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool ok = true;
  std::ostringstream note;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << " [" << what << "]";
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<void(Outcome&)> body;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::vector<double> eps_2_to_9() {
  std::vector<double> e;
  for (int m = 2; m <= 9; ++m) e.push_back(std::ldexp(1.0, -m));
  return e;
}

MultiPoly poly(int dim, const std::vector<std::pair<Exponent, double>>& terms) {
  MultiPoly p(dim);
  for (const auto& [e, c] : terms) p.add_term(e, c);
  return p;
}

void sweep_bounded(Outcome& o, const nlohmann::json& cfg_json) {
  const auto rep = run_sweep(SweepConfig::from_json(cfg_json));
  const std::string tag = cfg_json.at("surface").get<std::string>() + "/" + cfg_json.at("kernel").at("name").get<std::string>() +
                          "/" + (cfg_json.contains("phi") ? cfg_json.at("phi").dump() : cfg_json.at("phi_bar").dump());
  o.note << " " << tag << ":" << rep.verdict << " c1=" << fmt(rep.c1) << " fail=" << fmt(rep.failure_rate);
  o.require(rep.verdict == "bounded" && std::abs(rep.c1) <= 0.02, tag + " not bounded");
}

void ladder_fidelity(Outcome& o) {
  const auto l1 = flatness_ladder(registry_polynomial("wwz-thm1", 3));
  const auto l2 = flatness_ladder(registry_polynomial("wwz-thm2", 3));
  o.require(l1.ell0 == 2 && l1.codim == 2, "thm1 ladder");
  o.require(l2.ell0 == 2 && l2.codim == 1 && l2.normal_v && *l2.normal_v == std::vector<double>{1.0, 0.0, 0.0},
            "thm2 ladder");
  const std::string s1 = surface_summary("wwz-thm1"), s2 = surface_summary("wwz-thm2");
  o.require(s1 == "ell0=2 codim=2 theorem=1", "thm1 summary '" + s1 + "'");
  o.require(s2 == "ell0=2 codim=1 theorem=2 v=(1,0,0)", "thm2 summary '" + s2 + "'");
  o.note << " " << s1 << "; " << s2;
}

void det_identity(Outcome& o) {
  const auto rep = run_det_identity_suite(20240601ULL, 200, 1e-10);
  o.note << " instances=" << rep.instances << " worst=" << fmt(rep.worst_rel_error)
         << " family=" << rep.family_instances << " worst_family=" << fmt(rep.worst_family_rel_error);
  o.require(rep.instances == 200 && rep.pass(), "determinant suite");
  o.require(rep.family_instances > 0, "family not exercised");
}

void theorem1_control(Outcome& o) {
  for (const char* k : {"riesz-1", "riesz-3", "harmonic-22"})
    for (const char* phi : {"wild-c1", "power-2"})
      sweep_bounded(o, {{"surface", "wwz-thm1"}, {"phi", phi}, {"kernel", {{"name", k}}}, {"eps_levels", eps_2_to_9()}});
}

void theorem2_dichotomy(Outcome& o) {
  for (const char* k : {"riesz-2", "riesz-3", "harmonic-22"})
    sweep_bounded(o, {{"surface", "wwz-thm2"},
                      {"phi_bar", "affine-plus-square"},
                      {"kernel", {{"name", k}}},
                      {"eps_levels", eps_2_to_9()}});
  const auto d = run_dichotomy(make_surface("wwz-thm2", nullptr, "affine-plus-square"), make_kernel({{"name", "riesz-1"}}),
                               4, 14);
  o.note << " riesz-1:" << d.verdict << " hemisphere=" << fmt(d.hemisphere) << " c=" << fmt(d.growth.c);
  o.require(std::abs(d.hemisphere - kPi) <= 1e-6, "hemisphere value");
  o.require(d.verdict == "log-growth" && d.growth.c >= 0.1, "riesz-1 growth");
  o.require(d.growth.increasing_beyond_6, "values not increasing beyond j = 6");
}

void theorem3_control(Outcome& o) {
  ReducedIntegralSpec tmpl;
  tmpl.phi_bar = Profile::power(2.0);
  const auto g = necessity_growth(counterexample_grid(tmpl.phi_bar, 4, 14), tmpl);
  const double sup = *std::max_element(g.values.begin(), g.values.end());
  o.note << " sup=" << fmt(sup) << " first=" << fmt(g.values.front()) << " c=" << fmt(g.c);
  o.require(sup <= 1.2 * g.values.front(), "sup exceeds 1.2x the coarsest level");
  const auto d = run_dichotomy(make_surface("wwz-thm2", nullptr, "power-2"), make_kernel({{"name", "riesz-1"}}));
  o.note << " dichotomy:" << d.verdict;
  o.require(d.verdict == "bounded", "dichotomy verdict");
}

void theorem5_threshold(Outcome& o) {
  const double eps_min = std::ldexp(1.0, -24);
  const auto lo =
      theorem5_integrability(make_surface_function({{"name", "wwz-alpha"}, {"alpha", 0.5}}), default_theta0_grid(), eps_min);
  const auto hi =
      theorem5_integrability(make_surface_function({{"name", "wwz-alpha"}, {"alpha", 1.5}}), default_theta0_grid(), eps_min);
  auto tail = [](const Theorem5Report& r, bool want_max) {
    double v = want_max ? -INFINITY : INFINITY;
    for (std::size_t k = 6; k < r.ratios.size(); ++k) v = want_max ? std::max(v, r.ratios[k]) : std::min(v, r.ratios[k]);
    return v;
  };
  const double lo_max = tail(lo, true), hi_min = tail(hi, false);
  o.note << " alpha=0.5 max_ratio=" << fmt(lo_max) << " alpha=1.5 min_ratio=" << fmt(hi_min);
  o.require(lo.ratios.size() > 6 && lo_max <= 0.9, "alpha=0.5 ratios");
  o.require(hi.ratios.size() > 6 && hi_min >= 0.95, "alpha=1.5 ratios");
}

void section5_estimates(Outcome& o) {
  const auto surf = make_surface(nlohmann::json{{"name", "paraboloid"}, {"dim", 2}}, nullptr, "power-2");
  double lo = INFINITY, hi = 0.0;
  for (int k = 3; k <= 8; ++k) {
    const auto r = small_argument_check(make_mu_k(surf, k), default_small_argument_grid(2));
    lo = std::min(lo, r.C);
    hi = std::max(hi, r.C);
  }
  o.note << " C in [" << fmt(lo) << ", " << fmt(hi) << "]";
  o.require(std::isfinite(hi) && lo > 0.0 && hi / lo <= 4.0, "small-argument constant unstable");
  const auto m = make_mu_k(surf, 4);
  const auto sp = decay_fit(m, {1.0, 0.0}, DecayMode::Spatial);
  const auto mo = decay_fit(m, {}, DecayMode::Modulated);
  o.note << " slopes spatial=" << fmt(sp.slope) << " modulated=" << fmt(mo.slope);
  o.require(sp.used >= 3 && sp.slope <= -0.45, "spatial slope");
  o.require(mo.used >= 3 && mo.slope <= -0.45, "modulated slope");
}

void oracle_equivalence(Outcome& o) {
  double wm = 0.0, wk = 0.0, wr = 0.0;
  for (unsigned seed = 1; seed <= 10; ++seed) {
    const auto q = oracle::dim2_instance(seed);
    wm = std::max(wm, std::abs(truncated_multiplier(q) - oracle::multiplier_dim2(q)));
    const auto inst = oracle::mu_k_instance(seed);
    wk = std::max(wk, std::abs(mu_k_fourier(make_mu_k(inst.surface, inst.k), inst.xi, inst.gamma) -
                               oracle::mu_k_dim2(inst.surface, inst.a, inst.c, inst.k, inst.xi, inst.gamma)));
    const auto s = oracle::reduced_instance(seed);
    wr = std::max(wr, std::abs(reduced_integral(s) - oracle::reduced(s)));
  }
  o.note << " worst multiplier=" << fmt(wm) << " mu_k=" << fmt(wk) << " reduced=" << fmt(wr);
  o.require(wm <= 1e-3, "truncated_multiplier");
  o.require(wk <= 1e-3, "mu_k_fourier");
  o.require(wr <= 1e-3, "reduced_integral");
}

void invariants(Outcome& o) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0), lam(0.01, 100.0);

  // Homogeneity and annulus/hemisphere additivity.
  double hom = 0.0, add = 0.0;
  for (int dim : {2, 3}) {
    std::vector<std::string> names = {"harmonic-22", "harmonic-20"};
    for (int j = 1; j <= dim; ++j) names.push_back("riesz-" + std::to_string(j));
    for (const auto& nm : names) {
      const auto K = make_kernel({{"name", nm}, {"dim", dim}});
      for (int s = 0; s < 200; ++s) {
        std::vector<double> t(dim), lt(dim);
        const double l = lam(rng);
        for (int i = 0; i < dim; ++i) lt[i] = l * (t[i] = 2.0 * u(rng));
        const double b = K.eval(t);
        hom = std::max(hom, std::abs(K.eval(lt) * std::pow(l, dim) - b) / (1.0 + std::abs(b)));
      }
      std::vector<double> v(dim), w(dim);
      double n = 0.0;
      for (auto& x : v) n += (x = u(rng)) * x;
      for (int i = 0; i < dim; ++i) w[i] = -(v[i] /= std::sqrt(n));
      const double whole = annulus_integral(K, 0.2, 3.0);
      add = std::max(add, std::abs(whole));
      add = std::max(add, std::abs(hemisphere_integral(K, v, 0.2, 3.0) + hemisphere_integral(K, w, 0.2, 3.0) - whole));
    }
  }
  o.note << " homogeneity=" << fmt(hom) << " additivity=" << fmt(add);
  o.require(hom <= 1e-12, "homogeneity");
  o.require(add <= 2e-8, "annulus/hemisphere additivity");

  // Schulz reconstruction and grading exactness.
  const std::vector<Exponent> extras = {{1, 2, 0}, {1, 0, 2}, {2, 2, 0}, {0, 2, 2}, {2, 0, 2}, {1, 2, 2}, {0, 3, 3}};
  std::uniform_real_distribution<double> coef(0.05, 0.3);
  int forms = 0;
  bool schulz_ok = true;
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
    ++forms;
    schulz_ok = schulz_ok && f.pure + f.P1 + f.R == p;
    for (const auto& [e, c] : f.P1.terms()) schulz_ok = schulz_ok && f.grading(e) == Rational::make(1, 1);
    for (const auto& [e, c] : f.R.terms()) schulz_ok = schulz_ok && f.grading(e) > Rational::make(1, 1);
  }
  o.note << " schulz_forms=" << forms;
  o.require(forms > 0 && schulz_ok, "Schulz reconstruction/grading");

  // Gauge consistency.
  const LevelSetChart quartic = make_chart(poly(2, {{{4, 0}, 1.0}, {{2, 2}, 0.5}, {{0, 4}, 2.0}}), 4.0);
  double gauge = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = kPi * (u(rng) + 1.0);
    const double th[2] = {std::cos(a), std::sin(a)};
    const double rho = gauge_radius(quartic, th);
    const double p[2] = {rho * th[0], rho * th[1]};
    gauge = std::max(gauge, std::abs(quartic.H.eval(p) - 1.0));
  }
  o.note << " gauge=" << fmt(gauge);
  o.require(gauge <= 1e-10, "gauge consistency");

  // Implicit height: residual and y(0, λ)/λ → A^{-1/ℓ₀}.
  const MultiPoly p = poly(3, {{{2, 0, 0}, 3.0}, {{0, 4, 0}, 1.5}, {{0, 0, 4}, 2.5}, {{0, 2, 2}, 1.0}});
  const SurfaceSpec s = make_surface({{"poly", p.to_json()}});
  const SchulzForm f = schulz_decompose(p, flatness_ladder(p));
  const double sigma = lemma_sigma(f);
  double resid = 0.0;
  for (int k = 1; k <= 12; ++k) {
    const double l = std::ldexp(1.0, -k), rad = std::pow(l, 0.5 + sigma) / std::sqrt(2.0);
    for (int i = 0; i < 10; ++i) {
      const std::vector<double> x = {u(rng) * rad, u(rng) * rad};
      const double pt[3] = {implicit_height(s, f, x, l), x[0], x[1]};
      resid = std::max(resid, std::abs(p.eval(pt) - l * l) / (l * l));
    }
  }
  const double gap = std::abs(implicit_height(s, f, {0.0, 0.0}, std::ldexp(1.0, -20)) / std::ldexp(1.0, -20) - 1.0 / std::sqrt(3.0));
  o.note << " height_residual=" << fmt(resid) << " limit_gap=" << fmt(gap);
  o.require(resid <= 1e-10, "implicit-height residual");
  o.require(gap <= 1e-8, "implicit-height limit");

  // Conjugation symmetry for real Ω.
  double conj = 0.0;
  for (unsigned seed = 1; seed <= 3; ++seed) {
    auto q = oracle::dim2_instance(seed);
    const auto v = truncated_multiplier(q);
    q.gamma = -q.gamma;
    for (auto& x : q.xi) x = -x;
    conj = std::max(conj, std::abs(truncated_multiplier(q) - std::conj(v)));
  }
  o.note << " conjugation=" << fmt(conj);
  o.require(conj <= 2e-6 * 8, "conjugation symmetry");

  // Byte-level reproducibility of a fixed sweep.
  const nlohmann::json cfg = {{"surface", "wwz-thm2"},
                              {"phi_bar", "power-2"},
                              {"kernel", {{"name", "riesz-2"}, {"dim", 3}}},
                              {"eps_levels", {0.125, 0.0625, 0.03125, 0.015625}},
                              {"gamma_grid", {1.0, 10.0}},
                              {"xi_grid", {0.05}},
                              {"eta_grid", {0.05, 0.1}}};
  const auto a = run_sweep(SweepConfig::from_json(cfg)), b = run_sweep(SweepConfig::from_json(cfg));
  const bool same = a.to_json().dump(2) == b.to_json().dump(2) && a.to_csv() == b.to_csv() && a.plot_data() == b.plot_data();
  o.require(same, "sweep reproducibility");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "ladder fidelity", 1.0, ladder_fidelity},
      {2, "rank-one determinant identity", 1.0, det_identity},
      {3, "codimension-two positive control", 600.0, theorem1_control},
      {4, "codimension-one dichotomy", 600.0, theorem2_dichotomy},
      {5, "doubling sufficiency control", 120.0, theorem3_control},
      {6, "cap-measure threshold", 300.0, theorem5_threshold},
      {7, "dyadic measure estimates", 300.0, section5_estimates},
      {8, "oracle equivalence", 300.0, oracle_equivalence},
      {9, "invariant suite", 120.0, invariants},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.note << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) o.require(false, "runtime over " + fmt(c.budget_s) + " s");
    if (!o.ok) ++failed;
    std::printf("%s %d %s (%.2f s)%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name.c_str(), secs, o.note.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
