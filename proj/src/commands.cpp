#include "czlab/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "czlab/config.hpp"
#include "czlab/determinant.hpp"
#include "czlab/errors.hpp"
#include "czlab/experiments.hpp"
#include "czlab/gauge.hpp"
#include "czlab/kernel.hpp"
#include "czlab/ladder.hpp"
#include "czlab/mu_k.hpp"
#include "czlab/schulz.hpp"
#include "czlab/surface.hpp"
#include "czlab/sweep.hpp"

namespace czlab {

namespace fs = std::filesystem;

namespace {

nlohmann::json stamped(nlohmann::json body) {
  body["schema"] = kSchema;
  return body;
}

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

void write_metadata(const CommandContext& ctx, const fs::path& out) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream ts;
  ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  write_json(out / "metadata.json", stamped({{"subcommand", ctx.subcommand},
                                             {"config", ctx.config_path},
                                             {"workers", ctx.workers},
                                             {"timestamp", ts.str()}}));
}

// Exit code from a verdict and an optional expectation.
int verdict_exit(const nlohmann::json& cfg, const std::string& verdict) {
  if (!cfg.contains("expect")) return kExitOk;
  if (verdict == "inconclusive") return kExitInconclusive;
  return cfg.at("expect").get<std::string>() == verdict ? kExitOk : kExitMismatch;
}

nlohmann::json get_or_null(const nlohmann::json& cfg, const char* key) {
  return cfg.contains(key) ? cfg.at(key) : nlohmann::json(nullptr);
}

int cmd_analyze_surface(const nlohmann::json& cfg, const fs::path& out, std::ostream& os) {
  if (!cfg.contains("surface")) throw InputError("analyze-surface: config needs a surface");
  const auto psi = make_surface_function(cfg.at("surface"));
  if (psi->polynomial() == nullptr) throw UnsupportedConfigError("analyze-surface: ψ must be a polynomial");
  const FlatnessLadder ladder = flatness_ladder(*psi->polynomial());
  const SchulzForm form = schulz_decompose(*psi->polynomial(), ladder);
  write_json(out / "ladder.json", stamped({{"ladder", ladder.to_json()}}));
  write_json(out / "schulz.json", stamped({{"schulz", form.to_json()}}));
  os << surface_summary(cfg.at("surface")) << '\n';
  if (cfg.contains("expect")) {
    const auto& e = cfg.at("expect");
    bool ok = true;
    if (e.contains("ell0")) ok = ok && e.at("ell0").get<int>() == ladder.ell0;
    if (e.contains("codim")) ok = ok && e.at("codim").get<int>() == ladder.codim;
    if (e.contains("v")) ok = ok && ladder.normal_v && e.at("v").get<std::vector<double>>() == *ladder.normal_v;
    return ok ? kExitOk : kExitMismatch;
  }
  return kExitOk;
}

int cmd_check_kernel(const nlohmann::json& cfg, const fs::path& out, std::ostream& os) {
  if (!cfg.contains("kernel")) throw InputError("check-kernel: config needs a kernel");
  const CZKernel K = make_kernel(cfg.at("kernel"));
  const int d = K.dim();
  const double a = cfg.value("a", 0.1), b = cfg.value("b", 1.0);
  nlohmann::json rep = {{"kernel", K.to_json()}, {"a", a}, {"b", b}};
  bool ok = true;
  const double ann = annulus_integral(K, a, b);
  rep["annulus"] = ann;
  rep["annulus_holds"] = std::abs(ann) <= 1e-8;
  ok = ok && std::abs(ann) <= 1e-8;
  if (cfg.contains("v")) {
    const auto v = cfg.at("v").get<std::vector<double>>();
    std::vector<double> mv(v);
    for (double& x : mv) x = -x;
    const double hp = hemisphere_integral(K, v, a, b);
    const double hm = hemisphere_integral(K, mv, a, b);
    const double per_log = hp / std::log(b / a);
    rep["v"] = v;
    rep["hemisphere"] = hp;
    rep["hemisphere_minus_v"] = hm;
    rep["hemisphere_per_unit_log"] = per_log;
    rep["cancellation_holds"] = std::abs(hp) <= 1e-8;
    ok = ok && std::abs(hp) <= 1e-8;
  }
  if (d == 3 && cfg.value("levelset", true)) {
    LevelSetChart chart;
    if (cfg.contains("chart")) {
      const auto& c = cfg.at("chart");
      chart = make_chart(MultiPoly::from_json(c.at("poly")), c.value("deg", 2.0));
      if (c.contains("axes")) chart.axes = c.at("axes").get<std::vector<int>>();
    } else {
      MultiPoly H(2);
      H.add_term({2, 0}, 1.0);
      H.add_term({0, 2}, 1.0);
      chart = make_chart(H, 2.0);
    }
    const TailFit fit = levelset_cancellation_detail(K, chart);
    rep["levelset"] = fit.to_json();
    rep["levelset_holds"] = std::abs(fit.extrapolated) <= 1e-4;
    ok = ok && std::abs(fit.extrapolated) <= 1e-4;
  }
  if (d == 3 && cfg.value("flatten", true)) {
    const FlattenCheck fc = flatten_identity_check(K);
    rep["flatten"] = fc.to_json();
    const bool holds = std::abs(fc.lhs - fc.rhs) <= 1e-4 * std::max(1.0, std::abs(fc.rhs));
    rep["flatten_holds"] = holds;
    ok = ok && holds;
  }
  rep["pass"] = ok;
  write_json(out / "kernel.json", stamped(rep));
  os << "annulus=" << fmt(ann);
  if (rep.contains("hemisphere_per_unit_log")) os << " hemisphere=" << fmt(rep["hemisphere_per_unit_log"].get<double>());
  os << (ok ? " pass" : " fail") << '\n';
  return ok ? kExitOk : kExitMismatch;
}

int cmd_sweep(const nlohmann::json& cfg, const fs::path& out, std::ostream& os, int workers) {
  const SweepConfig sc = SweepConfig::from_json(cfg);
  const SweepReport rep = run_sweep(sc, workers);
  write_json(out / "sweep.json", rep.to_json());
  write_text(out / "sweep.csv", rep.to_csv());
  write_text(out / "sweep_plot.dat", rep.plot_data());
  os << "verdict=" << rep.verdict << " c1=" << fmt(rep.c1) << " failures=" << rep.failures << '/'
     << rep.records.size() << '\n';
  if (rep.failure_rate > 0.01) return kExitConvergence;
  return verdict_exit(cfg, rep.verdict);
}

int cmd_dichotomy(const nlohmann::json& cfg, const fs::path& out, std::ostream& os) {
  const nlohmann::json surf = cfg.value("surface", nlohmann::json("wwz-thm2"));
  const SurfaceSpec s = make_surface(surf, get_or_null(cfg, "phi"), get_or_null(cfg, "phi_bar"));
  if (!cfg.contains("kernel")) throw InputError("dichotomy: config needs a kernel");
  const CZKernel K = make_kernel(cfg.at("kernel"));
  const DichotomyReport rep = run_dichotomy(s, K, cfg.value("j_min", 4), cfg.value("j_max", 14),
                                            cfg.value("b", 0.5), cfg.value("eps_prime", 0.5));
  write_json(out / "dichotomy.json", stamped(rep.to_json()));
  std::ostringstream csv, plot;
  csv.precision(17);
  plot.precision(17);
  csv << "j,lambda,gamma,eta,xi,log_lambda_eta,value\n";
  plot << "# log(lambda*eta) value\n";
  for (std::size_t i = 0; i < rep.growth.values.size(); ++i) {
    const auto& q = rep.sequence;
    csv << q.j[i] << ',' << q.lambda[i] << ',' << q.gamma[i] << ',' << q.eta[i] << ',' << q.xi[i] << ','
        << q.predicted[i] << ',' << rep.growth.values[i] << '\n';
    plot << q.predicted[i] << ' ' << rep.growth.values[i] << '\n';
  }
  write_text(out / "dichotomy.csv", csv.str());
  write_text(out / "dichotomy_plot.dat", plot.str());
  os << "verdict=" << rep.verdict << " branch=" << rep.branch << " c=" << fmt(rep.growth.c) << '\n';
  return verdict_exit(cfg, rep.verdict);
}

int cmd_theorem5(const nlohmann::json& cfg, const fs::path& out, std::ostream& os, int workers) {
  nlohmann::json surf = cfg.value("surface", nlohmann::json::object());
  if (cfg.contains("alpha")) surf = {{"name", "wwz-alpha"}, {"alpha", cfg.at("alpha")}};
  const auto curve = make_surface_function(surf);
  std::vector<double> grid = default_theta0_grid();
  if (cfg.contains("theta0_grid")) grid = cfg.at("theta0_grid").get<std::vector<double>>();
  const double eps_min = cfg.value("eps_min", std::ldexp(1.0, -24));
  const Theorem5Report rep = theorem5_integrability(curve, grid, eps_min, workers);
  const std::string verdict = theorem5_verdict(rep, cfg.value("first_band", 6));
  nlohmann::json j = rep.to_json();
  j["verdict"] = verdict;
  write_json(out / "theorem5.json", stamped(j));
  std::ostringstream csv, plot;
  csv.precision(17);
  plot.precision(17);
  csv << "band,eps_lo,eps_hi,increment,ratio\n";
  plot << "# band increment\n";
  for (std::size_t k = 0; k < rep.increments.size(); ++k) {
    csv << k << ',' << rep.band_lo[k] << ',' << rep.band_hi[k] << ',' << rep.increments[k] << ',';
    if (k < rep.ratios.size()) csv << rep.ratios[k];
    csv << '\n';
    plot << k << ' ' << rep.increments[k] << '\n';
  }
  write_text(out / "theorem5.csv", csv.str());
  write_text(out / "theorem5_plot.dat", plot.str());
  os << "verdict=" << verdict << " sup=" << fmt(rep.sup_integral) << '\n';
  return verdict_exit(cfg, verdict);
}

int cmd_decay(const nlohmann::json& cfg, const fs::path& out, std::ostream& os) {
  const nlohmann::json surf = cfg.value("surface", nlohmann::json{{"name", "paraboloid"}, {"dim", 2}});
  nlohmann::json pb = get_or_null(cfg, "phi_bar");
  if (pb.is_null() && !cfg.contains("phi")) pb = "power-2";
  const SurfaceSpec s = make_surface(surf, get_or_null(cfg, "phi"), pb);
  const auto ks = cfg.value("k_values", std::vector<int>{3, 4, 5, 6, 7, 8});
  const int kd = cfg.value("decay_k", 4);
  const double tol = cfg.value("tol", 1e-8);
  std::vector<double> dir = cfg.value("direction", std::vector<double>{});
  if (dir.empty()) {
    dir.assign(s.dim(), 0.0);
    dir[0] = 1.0;
  }
  nlohmann::json rep = {{"k_values", ks}};
  std::vector<double> Cs;
  nlohmann::json small = nlohmann::json::array();
  for (int k : ks) {
    const MuKMeasure m = make_mu_k(s, k, tol);
    const SmallArgumentResult r = small_argument_check(m, default_small_argument_grid(s.dim()));
    Cs.push_back(r.C);
    nlohmann::json e = r.to_json();
    e["k"] = k;
    small.push_back(e);
  }
  const double cmax = *std::max_element(Cs.begin(), Cs.end());
  const double cmin = *std::min_element(Cs.begin(), Cs.end());
  const bool stable = cmin > 0.0 && cmax / cmin <= 4.0;
  rep["small_argument"] = small;
  rep["small_argument_stable"] = stable;
  const MuKMeasure md = make_mu_k(s, kd, tol);
  const DecayFit sp = decay_fit(md, dir, DecayMode::Spatial);
  const DecayFit mo = decay_fit(md, {1.0}, DecayMode::Modulated);
  rep["decay_k"] = kd;
  rep["spatial"] = sp.to_json();
  rep["modulated"] = mo.to_json();
  const bool decays = sp.slope <= -0.45 && mo.slope <= -0.45;
  const std::string verdict = decays && stable ? "decay" : "no-decay";
  rep["verdict"] = verdict;
  write_json(out / "decay.json", stamped(rep));
  std::ostringstream csv, plot;
  csv.precision(17);
  plot.precision(17);
  csv << "mode,delta,abs\n";
  plot << "# log(delta) log(abs) spatial, then modulated\n";
  for (const auto& [name, f] : {std::pair<std::string, const DecayFit*>{"spatial", &sp}, {"modulated", &mo}}) {
    for (std::size_t i = 0; i < f->delta.size(); ++i) {
      csv << name << ',' << f->delta[i] << ',' << f->values[i] << '\n';
      plot << std::log(f->delta[i]) << ' ' << std::log(std::max(f->values[i], 1e-300)) << '\n';
    }
    plot << '\n';
  }
  write_text(out / "decay.csv", csv.str());
  write_text(out / "decay_plot.dat", plot.str());
  os << "verdict=" << verdict << " spatial=" << fmt(sp.slope) << " modulated=" << fmt(mo.slope)
     << " C_ratio=" << fmt(cmax / cmin) << '\n';
  return verdict_exit(cfg, verdict);
}

int cmd_det_identity(const nlohmann::json& cfg, const fs::path& out, std::ostream& os) {
  const DetSuiteReport rep = run_det_identity_suite(cfg.value("seed", 20240601ULL), cfg.value("instances", 200),
                                                    cfg.value("rel_tol", 1e-10));
  write_json(out / "det_identity.json", stamped(rep.to_json()));
  os << (rep.pass() ? "pass" : "fail") << " instances=" << rep.instances << " worst=" << fmt(rep.worst_rel_error)
     << '\n';
  return rep.pass() ? kExitOk : kExitMismatch;
}

}  // namespace

std::string theorem5_verdict(const Theorem5Report& rep, std::size_t first_band) {
  if (rep.ratios.size() <= first_band) return "inconclusive";
  bool finite = true, divergent = true;
  for (std::size_t k = first_band; k < rep.ratios.size(); ++k) {
    finite = finite && rep.ratios[k] <= 0.9;
    divergent = divergent && rep.ratios[k] >= 0.95;
  }
  if (finite) return "finite";
  if (divergent) return "divergent";
  return "inconclusive";
}

std::vector<double> default_theta0_grid() {
  std::vector<double> g;
  for (int i = -4; i <= 4; ++i) g.push_back(0.5 * std::numbers::pi + 0.05 * i);
  return g;
}

std::string surface_summary(const nlohmann::json& surface_config) {
  const auto psi = make_surface_function(surface_config);
  if (psi->polynomial() == nullptr) throw UnsupportedConfigError("surface summary: ψ must be a polynomial");
  const FlatnessLadder L = flatness_ladder(*psi->polynomial());
  std::ostringstream os;
  os << "ell0=" << L.ell0 << " codim=" << L.codim;
  if (L.codim >= 2)
    os << " theorem=1";
  else if (L.codim == 1)
    os << " theorem=2";
  else
    os << " theorem=unknown";
  if (L.normal_v) {
    os << " v=(";
    for (std::size_t i = 0; i < L.normal_v->size(); ++i) os << (i ? "," : "") << fmt((*L.normal_v)[i]);
    os << ')';
  }
  return os.str();
}

int run_command(const CommandContext& ctx, std::ostream& out, std::ostream& err) {
  try {
    nlohmann::json cfg = nlohmann::json::object();
    if (!ctx.config_path.empty()) {
      cfg = load_config(ctx.config_path);
    } else if (ctx.subcommand != "det-identity") {
      throw InputError(ctx.subcommand + ": --config is required");
    }
    check_task(cfg, ctx.subcommand);
    const fs::path dir(ctx.out_dir);
    fs::create_directories(dir);
    int code;
    if (ctx.subcommand == "analyze-surface")
      code = cmd_analyze_surface(cfg, dir, out);
    else if (ctx.subcommand == "check-kernel")
      code = cmd_check_kernel(cfg, dir, out);
    else if (ctx.subcommand == "sweep")
      code = cmd_sweep(cfg, dir, out, ctx.workers);
    else if (ctx.subcommand == "dichotomy")
      code = cmd_dichotomy(cfg, dir, out);
    else if (ctx.subcommand == "theorem5")
      code = cmd_theorem5(cfg, dir, out, ctx.workers);
    else if (ctx.subcommand == "decay")
      code = cmd_decay(cfg, dir, out);
    else if (ctx.subcommand == "det-identity")
      code = cmd_det_identity(cfg, dir, out);
    else
      throw InputError("unknown subcommand " + ctx.subcommand);
    write_metadata(ctx, dir);
    return code;
  } catch (const FiniteTypeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFiniteType;
  } catch (const OrientationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFiniteType;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
}

}  // namespace czlab
