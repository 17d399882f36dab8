#include "czlab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "czlab/errors.hpp"
#include "czlab/experiments.hpp"
#include "czlab/ladder.hpp"
#include "czlab/parallel.hpp"

namespace czlab {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0 && hi >= lo && per_decade >= 1)) throw InputError("log_grid: need 0 < lo <= hi");
  const int n = static_cast<int>(std::lround(std::log10(hi / lo) * per_decade));
  std::vector<double> g;
  for (int i = 0; i <= n; ++i) g.push_back(lo * std::pow(10.0, static_cast<double>(i) / per_decade));
  if (n == 0) g = {lo};
  return g;
}

namespace {

std::vector<double> default_eps_levels() {
  std::vector<double> e;
  for (int k = 2; k <= 9; ++k) e.push_back(std::ldexp(1.0, -k));
  return e;
}

std::vector<double> read_grid(const nlohmann::json& j, const char* key, std::vector<double> def) {
  if (!j.contains(key)) return def;
  const auto& g = j.at(key);
  if (g.is_array()) return g.get<std::vector<double>>();
  if (g.is_object())
    return log_grid(g.at("lo").get<double>(), g.at("hi").get<double>(), g.value("per_decade", 7));
  throw InputError(std::string("sweep: bad grid '") + key + "'");
}

void fit_line(const std::vector<double>& x, const std::vector<double>& y, double& c0, double& c1, double& rms) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  c1 = den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
  c0 = (sy - c1 * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) ss += std::pow(y[i] - c0 - c1 * x[i], 2);
  rms = std::sqrt(ss / n);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

SweepConfig SweepConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("sweep: config must be an object");
  SweepConfig c;
  if (!j.contains("surface") || !j.contains("kernel")) throw InputError("sweep: config needs surface and kernel");
  c.surface = j.at("surface");
  c.kernel = j.at("kernel");
  c.phi = j.value("phi", nlohmann::json(nullptr));
  c.phi_bar = j.value("phi_bar", nlohmann::json(nullptr));
  c.modulation = j.value("modulation", nlohmann::json(nullptr));
  c.eps_levels = read_grid(j, "eps_levels", default_eps_levels());
  c.gamma_grid = read_grid(j, "gamma_grid", log_grid(1.0, 1e6, 7));
  c.xi_grid = read_grid(j, "xi_grid", log_grid(1.0, 1e4, 7));
  c.eta_grid = read_grid(j, "eta_grid", log_grid(1.0, 1e4, 7));
  c.grid_mode = j.value("grid_mode", std::string("product"));
  c.necessity_j_max = j.value("necessity_j_max", 14);
  if (j.contains("eta_axis") && !j.at("eta_axis").is_null()) c.eta_axis = j.at("eta_axis").get<int>();
  c.xi_direction = j.value("xi_direction", std::vector<double>{});
  const nlohmann::json tol = j.value("tolerance", nlohmann::json::object());
  c.annulus_tol = tol.value("annulus_tol", 1e-6);
  c.max_cells = tol.value("max_cells", 200'000L);
  c.slope_threshold = tol.value("slope_threshold", 0.02);
  c.fit_tol_factor = tol.value("fit_tol_factor", 0.05);
  c.jitter = j.value("jitter", 0.0);
  c.seed = j.value("seed", 1ULL);
  c.stop_when_inconclusive = j.value("stop_when_inconclusive", true);

  if (c.eps_levels.empty() || c.gamma_grid.empty() || c.xi_grid.empty() || c.eta_grid.empty())
    throw InputError("sweep: grids must be nonempty");
  for (std::size_t i = 0; i < c.eps_levels.size(); ++i) {
    if (!(c.eps_levels[i] > 0.0 && c.eps_levels[i] < 1.0)) throw InputError("sweep: ε levels must lie in (0, 1)");
    if (i > 0 && !(c.eps_levels[i] < c.eps_levels[i - 1])) throw InputError("sweep: ε levels must strictly decrease");
  }
  if (c.grid_mode != "product" && c.grid_mode != "necessity") throw InputError("sweep: unknown grid_mode");
  if (!(c.annulus_tol > 0.0) || c.max_cells < 1) throw InputError("sweep: bad tolerance overrides");
  return c;
}

nlohmann::json SweepConfig::to_json() const {
  nlohmann::json j = {{"surface", surface},
                      {"phi", phi},
                      {"phi_bar", phi_bar},
                      {"kernel", kernel},
                      {"modulation", modulation},
                      {"eps_levels", eps_levels},
                      {"gamma_grid", gamma_grid},
                      {"xi_grid", xi_grid},
                      {"eta_grid", eta_grid},
                      {"grid_mode", grid_mode},
                      {"necessity_j_max", necessity_j_max},
                      {"eta_axis", eta_axis ? nlohmann::json(*eta_axis) : nlohmann::json(nullptr)},
                      {"xi_direction", xi_direction},
                      {"tolerance",
                       {{"annulus_tol", annulus_tol},
                        {"max_cells", max_cells},
                        {"slope_threshold", slope_threshold},
                        {"fit_tol_factor", fit_tol_factor}}},
                      {"jitter", jitter},
                      {"seed", seed},
                      {"stop_when_inconclusive", stop_when_inconclusive}};
  return j;
}

std::vector<SweepPoint> sweep_points(const SweepConfig& cfg, const SurfaceSpec& surface) {
  const int d = surface.dim();
  std::optional<int> eta_axis = cfg.eta_axis;
  if (!eta_axis && surface.poly() != nullptr) {
    const FlatnessLadder ladder = flatness_ladder(*surface.poly());
    if (ladder.codim == 1 && ladder.normal_v) {
      const auto& v = *ladder.normal_v;
      eta_axis = static_cast<int>(std::max_element(v.begin(), v.end(), [](double a, double b) {
                                    return std::abs(a) < std::abs(b);
                                  }) - v.begin());
    } else if (ladder.codim < d) {
      const SchulzForm form = schulz_decompose(*surface.poly(), ladder);
      if (!form.flat_axes.empty()) eta_axis = form.flat_axes.front();
    }
  }
  if (eta_axis && (*eta_axis < 0 || *eta_axis >= d)) throw InputError("sweep: eta_axis out of range");
  std::vector<double> dir = cfg.xi_direction;
  if (dir.empty()) {
    dir.assign(d, 1.0);
    if (eta_axis) dir[*eta_axis] = 0.0;
  }
  if (static_cast<int>(dir.size()) != d) throw InputError("sweep: xi_direction has the wrong length");
  double n = 0.0;
  for (double v : dir) n += v * v;
  n = std::sqrt(n);
  if (!(n > 0.0)) throw InputError("sweep: zero xi_direction");
  for (double& v : dir) v /= n;

  auto make = [&](double g, double x, double e) {
    SweepPoint p;
    p.gamma = g;
    p.xi = x;
    p.eta = eta_axis ? e : 0.0;
    p.dual.assign(d, 0.0);
    for (int i = 0; i < d; ++i) p.dual[i] = x * dir[i];
    if (eta_axis) p.dual[*eta_axis] += e;
    return p;
  };

  std::vector<SweepPoint> pts;
  if (cfg.grid_mode == "necessity") {
    if (!surface.phi_bar) throw InputError("sweep: necessity grid needs φ̄");
    const auto seq = necessity_sequence(*surface.phi_bar, cfg.necessity_j_max);
    for (std::size_t i = 0; i < seq.j.size(); ++i)
      if (seq.gamma[i] <= kCalibratedRange && seq.eta[i] <= kCalibratedRange && seq.xi[i] <= kCalibratedRange)
        pts.push_back(make(seq.gamma[i], seq.xi[i], seq.eta[i]));
    if (pts.empty()) throw InputError("sweep: no necessity point lies in the calibrated range");
    return pts;
  }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto jit = [&](std::vector<double> g) {
    if (cfg.jitter > 0.0)
      for (double& v : g) v *= std::exp(cfg.jitter * u(rng));
    return g;
  };
  const auto gg = jit(cfg.gamma_grid);
  const auto xg = jit(cfg.xi_grid);
  const auto eg = eta_axis ? jit(cfg.eta_grid) : std::vector<double>{0.0};
  for (double g : gg)
    for (double x : xg)
      for (double e : eg) pts.push_back(make(g, x, e));
  return pts;
}

std::string sweep_verdict(double c1, double residual, double fit_tol, double failure_rate, double slope_threshold) {
  if (!(failure_rate <= kMaxFailureRate) || !std::isfinite(c1) || !std::isfinite(residual)) return "inconclusive";
  if (std::abs(c1) <= slope_threshold && residual <= fit_tol) return "bounded";
  if (c1 >= 3.0 * slope_threshold) return "log-growth";
  return "inconclusive";
}

SweepReport run_sweep(const SweepConfig& cfg, int workers) {
  SweepReport rep;
  rep.config = cfg;
  const SurfaceSpec surface = make_surface(cfg.surface, cfg.phi, cfg.phi_bar);
  const CZKernel kernel = make_kernel(cfg.kernel);
  std::optional<Profile> modulation;
  if (!cfg.modulation.is_null()) modulation = Profile::from_json(cfg.modulation);
  rep.points = sweep_points(cfg, surface);
  const std::size_t L = cfg.eps_levels.size();
  rep.records.resize(rep.points.size() * L);
  MultiplierOptions opt;
  opt.annulus_tol = cfg.annulus_tol;
  opt.max_cells = cfg.max_cells;
  opt.workers = 1;

  // Levels whose annuli include one predicted over budget fail without evaluation.
  std::vector<std::size_t> predicted_first_fail(rep.points.size(), L);
  parallel_for(rep.points.size(), workers, [&](std::size_t i) {
    MultiplierQuery q{surface, kernel, rep.points[i].gamma, rep.points[i].dual, cfg.eps_levels.back(), modulation};
    const auto cells = multiplier_predicted_cells(q);
    const auto radii = dyadic_annuli(q.eps);
    for (std::size_t l = 0; l < L; ++l) {
      bool fails = false;
      for (std::size_t a = 0; a < radii.size() && radii[a][0] >= cfg.eps_levels[l]; ++a)
        fails = fails || cells[a] > static_cast<double>(cfg.max_cells);
      if (radii.back()[0] < cfg.eps_levels[l] &&
          std::none_of(radii.begin(), radii.end(), [&](const auto& r) { return r[0] == cfg.eps_levels[l]; })) {
        q.eps = cfg.eps_levels[l];
        const auto own = multiplier_predicted_cells(q);
        fails = fails || own.back() > static_cast<double>(cfg.max_cells);
      }
      if (fails) {
        predicted_first_fail[i] = l;
        break;
      }
    }
  });
  long predicted = 0;
  for (std::size_t f : predicted_first_fail) predicted += static_cast<long>(L - f);
  const bool stop = cfg.stop_when_inconclusive &&
                    static_cast<double>(predicted) > kMaxFailureRate * static_cast<double>(rep.records.size());

  parallel_for(rep.points.size(), workers, [&](std::size_t i) {
    MultiplierQuery q{surface, kernel, rep.points[i].gamma, rep.points[i].dual, cfg.eps_levels.back(), modulation};
    if (stop) {
      for (std::size_t l = 0; l < L; ++l) {
        SweepRecord& r = rep.records[i * L + l];
        r.point = i;
        r.eps = cfg.eps_levels[l];
        if (l >= predicted_first_fail[i]) {
          r.predicted_failure = true;
          r.failure = "phase variation predicts more cells than the budget of " + std::to_string(cfg.max_cells);
        } else {
          r.skipped = true;
          r.failure = "not evaluated: predicted failures already exceed the inconclusive threshold";
        }
      }
      return;
    }
    const auto finest = multiplier_annuli(q, opt, true);
    for (std::size_t l = 0; l < L; ++l) {
      SweepRecord& r = rep.records[i * L + l];
      r.point = i;
      r.eps = cfg.eps_levels[l];
      std::vector<AnnulusContribution> ann;
      const auto it = std::find_if(finest.begin(), finest.end(), [&](const AnnulusContribution& a) {
        return a.r_lo == r.eps;
      });
      if (it != finest.end()) {
        ann.assign(finest.begin(), it + 1);
      } else {
        q.eps = r.eps;
        ann = multiplier_annuli(q, opt, true);
      }
      r.ok = true;
      for (const auto& a : ann) {
        if (!a.ok) {
          r.ok = false;
          r.failure = a.failure;
          break;
        }
        r.value += a.value;
      }
      if (!r.ok) r.value = {};
    }
  });

  rep.sup_abs.assign(L, 0.0);
  std::vector<bool> any(L, false);
  for (const auto& r : rep.records) {
    const std::size_t l = &r - rep.records.data();
    if (r.skipped) {
      ++rep.skipped;
      continue;
    }
    if (!r.ok) {
      ++rep.failures;
      continue;
    }
    any[l % L] = true;
    rep.sup_abs[l % L] = std::max(rep.sup_abs[l % L], std::abs(r.value));
  }
  // After an early stop this is a lower bound.
  rep.failure_rate = rep.records.empty() ? 0.0 : static_cast<double>(rep.failures) / rep.records.size();
  std::vector<double> x, y;
  for (std::size_t l = 0; l < L; ++l)
    if (any[l]) {
      x.push_back(std::log(1.0 / cfg.eps_levels[l]));
      y.push_back(rep.sup_abs[l]);
    }
  if (x.size() >= 2 && !stop) {
    fit_line(x, y, rep.c0, rep.c1, rep.residual);
    rep.fit_tol = cfg.fit_tol_factor * median(y);
    rep.verdict = sweep_verdict(rep.c1, rep.residual, rep.fit_tol, rep.failure_rate, cfg.slope_threshold);
  } else {
    rep.c0 = rep.c1 = rep.residual = NAN;
    rep.verdict = "inconclusive";
  }
  return rep;
}

nlohmann::json SweepReport::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points) pts.push_back({{"gamma", p.gamma}, {"xi", p.xi}, {"eta", p.eta}, {"dual", p.dual}});
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json e = {{"point", r.point}, {"eps", r.eps}, {"ok", r.ok}, {"re", r.value.real()}, {"im", r.value.imag()}};
    if (!r.ok) e["failure"] = r.failure;
    if (r.predicted_failure) e["predicted_failure"] = true;
    if (r.skipped) e["skipped"] = true;
    recs.push_back(e);
  }
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"schema", "czlab/1"},
          {"config", config.to_json()},
          {"points", pts},
          {"records", recs},
          {"sup_abs", sup_abs},
          {"fit", {{"c0", num(c0)}, {"c1", num(c1)}, {"residual", num(residual)}, {"fit_tol", num(fit_tol)}}},
          {"failures", failures},
          {"skipped", skipped},
          {"failure_rate", failure_rate},
          {"verdict", verdict}};
}

SweepReport SweepReport::from_json(const nlohmann::json& j) {
  SweepReport r;
  r.config = SweepConfig::from_json(j.at("config"));
  for (const auto& p : j.at("points"))
    r.points.push_back({p.at("gamma").get<double>(), p.at("xi").get<double>(), p.at("eta").get<double>(),
                        p.at("dual").get<std::vector<double>>()});
  for (const auto& e : j.at("records")) {
    SweepRecord s;
    s.point = e.at("point").get<std::size_t>();
    s.eps = e.at("eps").get<double>();
    s.ok = e.at("ok").get<bool>();
    s.value = {e.at("re").get<double>(), e.at("im").get<double>()};
    s.failure = e.value("failure", std::string());
    s.predicted_failure = e.value("predicted_failure", false);
    s.skipped = e.value("skipped", false);
    r.records.push_back(s);
  }
  r.sup_abs = j.at("sup_abs").get<std::vector<double>>();
  auto num = [](const nlohmann::json& v) { return v.is_null() ? NAN : v.get<double>(); };
  const auto& f = j.at("fit");
  r.c0 = num(f.at("c0"));
  r.c1 = num(f.at("c1"));
  r.residual = num(f.at("residual"));
  r.fit_tol = num(f.at("fit_tol"));
  r.failures = j.at("failures").get<long>();
  r.skipped = j.value("skipped", 0L);
  r.failure_rate = j.at("failure_rate").get<double>();
  r.verdict = j.at("verdict").get<std::string>();
  return r;
}

std::string SweepReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  const std::size_t d = points.empty() ? 0 : points.front().dual.size();
  os << "gamma";
  for (std::size_t i = 0; i < d; ++i) os << ",xi" << i + 1;
  os << ",eta,eps,re,im,abs\n";
  for (const auto& r : records) {
    const SweepPoint& p = points[r.point];
    os << p.gamma;
    for (double v : p.dual) os << ',' << v;
    os << ',' << p.eta << ',' << r.eps << ',';
    if (r.ok)
      os << r.value.real() << ',' << r.value.imag() << ',' << std::abs(r.value) << '\n';
    else
      os << "nan,nan,nan\n";
  }
  return os.str();
}

std::string SweepReport::plot_data() const {
  std::ostringstream os;
  os.precision(17);
  os << "# log(1/eps) sup_abs\n";
  for (std::size_t l = 0; l < sup_abs.size(); ++l) os << std::log(1.0 / config.eps_levels[l]) << ' ' << sup_abs[l] << '\n';
  return os.str();
}

}  // namespace czlab
