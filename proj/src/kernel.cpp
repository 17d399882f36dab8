#include "czlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "czlab/errors.hpp"
#include "czlab/quadrature.hpp"

namespace czlab {

namespace {

constexpr double kPi = std::numbers::pi;

enum TermKind { kRiesz = 1, kHarmonic22, kHarmonic20, kBiased, kConstant };

int term_kind(const std::string& name) {
  if (name == "riesz") return kRiesz;
  if (name == "harmonic-22") return kHarmonic22;
  if (name == "harmonic-20") return kHarmonic20;
  if (name == "biased") return kBiased;
  if (name == "constant") return kConstant;
  throw InputError("kernel: unknown term '" + name + "'");
}

double term_omega(const KernelTerm& t, std::span<const double> th) {
  switch (t.kind) {
    case kRiesz:
      return th[t.index - 1];
    case kHarmonic22:
      return th[0] * th[1];
    case kHarmonic20:
      return th.size() == 3 ? 3.0 * th[2] * th[2] - 1.0 : th[0] * th[0] - th[1] * th[1];
    case kBiased:
      return th[0] + t.param;
    default:
      return t.param;
  }
}

KernelTerm parse_term(const nlohmann::json& j, int dim) {
  if (!j.is_object() || !j.contains("name")) throw InputError("kernel: a term needs a name");
  const std::string nm = j.at("name").get<std::string>();
  KernelTerm t;
  t.weight = j.value("weight", 1.0);
  if (nm.rfind("riesz-", 0) == 0) {
    t.name = "riesz";
    try {
      t.index = std::stoi(nm.substr(6));
    } catch (const std::exception&) {
      throw InputError("kernel: bad riesz index in '" + nm + "'");
    }
    if (t.index < 1 || t.index > dim) throw InputError("kernel: riesz index out of range for dim");
  } else if (nm == "harmonic-22" || nm == "harmonic-20") {
    t.name = nm;
  } else if (nm == "biased") {
    t.name = nm;
    t.param = j.value("c", 0.5);
  } else if (nm == "constant") {
    t.name = nm;
    t.param = j.value("c", 1.0);
  } else {
    throw InputError("kernel: unknown registry entry '" + nm + "'");
  }
  return t;
}

std::string term_label(const KernelTerm& t) { return t.name == "riesz" ? "riesz-" + std::to_string(t.index) : t.name; }

void check_ab(double a, double b) {
  if (!(a > 0.0 && a < b && std::isfinite(b))) throw InputError("annulus: need 0 < a < b");
}

// Orthonormal frame (v, e1, e2) in R³.
void complete_frame(const double v[3], double e1[3], double e2[3]) {
  const int k = std::abs(v[0]) < 0.9 ? 0 : 1;
  double w[3] = {0, 0, 0};
  w[k] = 1.0;
  const double p = w[0] * v[0] + w[1] * v[1] + w[2] * v[2];
  for (int i = 0; i < 3; ++i) e1[i] = w[i] - p * v[i];
  const double n = std::sqrt(e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]);
  for (int i = 0; i < 3; ++i) e1[i] /= n;
  e2[0] = v[1] * e1[2] - v[2] * e1[1];
  e2[1] = v[2] * e1[0] - v[0] * e1[2];
  e2[2] = v[0] * e1[1] - v[1] * e1[0];
}

template <class Level>
double doubled(Level level, int start, int max_level, double tol, const char* what) {
  double prev = level(start);
  for (int n = 2 * start; n <= max_level; n *= 2) {
    const double cur = level(n);
    if (std::abs(cur - prev) <= tol) return cur;
    prev = cur;
  }
  throw ConvergenceError(std::string(what) + ": quadrature did not settle", prev, INFINITY);
}

std::vector<double> unit(std::span<const double> v) {
  double n2 = 0.0;
  for (double x : v) n2 += x * x;
  if (!(std::abs(std::sqrt(n2) - 1.0) <= 1e-9)) throw InputError("hemisphere: v must be a unit vector");
  return {v.begin(), v.end()};
}

}  // namespace

CZKernel::CZKernel(int dim, std::vector<KernelTerm> terms, bool validate)
    : dim_(dim), terms_(std::move(terms)) {
  if (dim_ != 2 && dim_ != 3) throw InputError("kernel: dim must be 2 or 3");
  if (terms_.empty()) throw InputError("kernel: no terms");
  for (auto& t : terms_) t.kind = term_kind(t.name);
  for (const auto& t : terms_)
    if (t.name == "riesz" && (t.index < 1 || t.index > dim_)) throw InputError("kernel: riesz index out of range");
  const double mean = sphere_integral(dim_, [&](std::span<const double> th) { return omega(th); }, 1e-12);
  if (validate) {
    if (std::abs(mean) > 1e-8)
      throw InvariantError("kernel: ∫Ω dσ = " + std::to_string(mean) + " violates the mean-zero condition");
    validated_ = true;
  } else {
    validated_ = std::abs(mean) <= 1e-8;
  }
}

double CZKernel::omega(std::span<const double> theta) const {
  double s = 0.0;
  for (const auto& t : terms_) s += t.weight * term_omega(t, theta);
  return s;
}

double CZKernel::eval(std::span<const double> t) const {
  double n2 = 0.0;
  for (int i = 0; i < dim_; ++i) n2 += t[i] * t[i];
  const double r = std::sqrt(n2);
  if (!(r > 0.0)) throw InputError("kernel: K is singular at the origin");
  double th[3];
  for (int i = 0; i < dim_; ++i) th[i] = t[i] / r;
  return omega(std::span<const double>(th, dim_)) / (dim_ == 3 ? n2 * r : n2);
}

nlohmann::json CZKernel::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : terms_) {
    nlohmann::json e = {{"name", term_label(t)}, {"weight", t.weight}};
    if (t.name == "biased" || t.name == "constant") e["c"] = t.param;
    terms.push_back(e);
  }
  return {{"name", "combo"}, {"dim", dim_}, {"terms", terms}, {"validated", validated_}};
}

CZKernel CZKernel::scaled(double s) const {
  auto t = terms_;
  for (auto& x : t) x.weight *= s;
  return CZKernel(dim_, t, validated_);
}

CZKernel CZKernel::plus(const CZKernel& o) const {
  if (o.dim_ != dim_) throw InputError("kernel: dimension mismatch in sum");
  auto t = terms_;
  t.insert(t.end(), o.terms_.begin(), o.terms_.end());
  return CZKernel(dim_, t, validated_ && o.validated_);
}

CZKernel make_kernel(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("kernel: expected an object");
  const int dim = j.value("dim", 3);
  const bool validate = j.value("validate", true);
  const std::string nm = j.value("name", std::string("combo"));
  std::vector<KernelTerm> terms;
  if (nm == "combo") {
    if (!j.contains("terms") || !j.at("terms").is_array()) throw InputError("kernel: combo needs a terms array");
    for (const auto& t : j.at("terms")) terms.push_back(parse_term(t, dim));
  } else {
    terms.push_back(parse_term(j, dim));
  }
  return CZKernel(dim, terms, validate);
}

double sphere_integral(int dim, const std::function<double(std::span<const double>)>& f, double tol) {
  if (dim == 2) {
    return doubled(
        [&](int n) {
          double s = 0.0;
          for (int i = 0; i < n; ++i) {
            const double a = 2.0 * kPi * i / n;
            const double th[2] = {std::cos(a), std::sin(a)};
            s += f(th);
          }
          return s * 2.0 * kPi / n;
        },
        4096, 1 << 18, tol, "sphere_integral");
  }
  if (dim != 3) throw InputError("sphere_integral: dim must be 2 or 3");
  return doubled(
      [&](int npol) {
        const int naz = 2 * npol;
        std::vector<double> x, w;
        gauss_legendre(npol, x, w);
        double s = 0.0;
        for (int p = 0; p < npol; ++p) {
          const double mu = x[p], sn = std::sqrt(1.0 - mu * mu);
          double ring = 0.0;
          for (int i = 0; i < naz; ++i) {
            const double a = 2.0 * kPi * i / naz;
            const double th[3] = {sn * std::cos(a), sn * std::sin(a), mu};
            ring += f(th);
          }
          s += w[p] * ring * 2.0 * kPi / naz;
        }
        return s;
      },
      64, 1024, tol, "sphere_integral");
}

double hemisphere_sphere_integral(int dim, std::span<const double> v,
                                  const std::function<double(std::span<const double>)>& f, double tol) {
  if (static_cast<int>(v.size()) != dim) throw InputError("hemisphere: v has the wrong dimension");
  const auto u = unit(v);
  if (dim == 2) {
    const double a0 = std::atan2(u[1], u[0]);
    return doubled(
        [&](int n) {
          std::vector<double> x, w;
          gauss_legendre(n, x, w);
          double s = 0.0;
          for (int i = 0; i < n; ++i) {
            const double a = a0 + 0.5 * kPi * x[i];
            const double th[2] = {std::cos(a), std::sin(a)};
            s += w[i] * f(th);
          }
          return 0.5 * kPi * s;
        },
        64, 1 << 14, tol, "hemisphere_integral");
  }
  if (dim != 3) throw InputError("hemisphere: dim must be 2 or 3");
  double e1[3], e2[3];
  complete_frame(u.data(), e1, e2);
  return doubled(
      [&](int npol) {
        const int naz = 2 * npol;
        std::vector<double> x, w;
        gauss_legendre(npol, x, w);
        double s = 0.0;
        for (int p = 0; p < npol; ++p) {
          const double mu = 0.5 * (x[p] + 1.0), sn = std::sqrt(1.0 - mu * mu);
          double ring = 0.0;
          for (int i = 0; i < naz; ++i) {
            const double a = 2.0 * kPi * i / naz;
            const double c = sn * std::cos(a), d = sn * std::sin(a);
            double th[3];
            for (int k = 0; k < 3; ++k) th[k] = mu * u[k] + c * e1[k] + d * e2[k];
            ring += f(th);
          }
          s += 0.5 * w[p] * ring * 2.0 * kPi / naz;
        }
        return s;
      },
      64, 1024, tol, "hemisphere_integral");
}

double annulus_integral(const CZKernel& K, double a, double b) {
  check_ab(a, b);
  return std::log(b / a) * sphere_integral(K.dim(), [&](std::span<const double> th) { return K.omega(th); }, 1e-12);
}

double hemisphere_integral(const CZKernel& K, std::span<const double> v, double a, double b) {
  check_ab(a, b);
  return std::log(b / a) *
         hemisphere_sphere_integral(K.dim(), v, [&](std::span<const double> th) { return K.omega(th); }, 1e-12);
}

nlohmann::json TailFit::to_json() const {
  return {{"Z", Z}, {"values", values}, {"extrapolated", extrapolated}, {"spread", spread}};
}

TailFit extrapolate_tail(const std::vector<double>& Z, const std::vector<double>& values) {
  if (Z.size() != values.size() || Z.size() < 3) throw InputError("extrapolate_tail: need at least three levels");
  auto neville = [&](std::size_t first, std::size_t last) {
    std::vector<double> h, p;
    for (std::size_t i = first; i < last; ++i) {
      h.push_back(1.0 / Z[i]);
      p.push_back(values[i]);
    }
    const std::size_t n = h.size();
    for (std::size_t m = 1; m < n; ++m)
      for (std::size_t i = 0; i + m < n; ++i) p[i] = (h[i + m] * p[i] - h[i] * p[i + 1]) / (h[i + m] - h[i]);
    return p[0];
  };
  TailFit fit;
  fit.Z = Z;
  fit.values = values;
  fit.extrapolated = neville(0, Z.size());
  fit.spread = std::abs(neville(0, Z.size() - 1) - neville(1, Z.size()));
  for (double v : values)
    if (!std::isfinite(v)) throw ConvergenceError("tail extrapolation: non-finite level value", 0.0, INFINITY);
  return fit;
}

namespace {

const std::vector<double>& tail_levels() {
  static const std::vector<double> z = {8, 16, 32, 64, 128, 256};
  return z;
}

void check_fit(const TailFit& fit, const char* what) {
  const double scale = std::max(1.0, std::abs(fit.extrapolated));
  if (!(fit.spread <= 1e-6 * scale))
    throw ConvergenceError(std::string(what) + ": tail extrapolation did not settle", fit.extrapolated, fit.spread);
}

}  // namespace

TailFit levelset_cancellation_detail(const CZKernel& K, const LevelSetChart& chart) {
  const int dim = K.dim();
  const int r = chart.r();
  if (static_cast<int>(chart.axes.size()) != r) throw InputError("levelset: chart axes do not match H");
  for (int a : chart.axes)
    if (a < 0 || a >= dim) throw InputError("levelset: chart axis outside the kernel dimension");
  if (r < 2) throw UnsupportedConfigError("levelset: r < 2 leaves a slowly decaying multi-dimensional tail");
  std::vector<int> flat;
  for (int i = 0; i < dim; ++i)
    if (std::find(chart.axes.begin(), chart.axes.end(), i) == chart.axes.end()) flat.push_back(i);

  if (flat.empty()) {
    // ∫_{H=1} K h dσ = ∫ Ω dθ since K(ρθ) ρ^r = Ω(θ) when r = dim.
    const double v = sphere_integral(dim, [&](std::span<const double> th) { return K.omega(th); }, 1e-12);
    TailFit fit;
    fit.extrapolated = v;
    return fit;
  }
  if (flat.size() != 1 || r != 2)
    throw UnsupportedConfigError("levelset: only one flat variable over a two-variable H is supported");

  const int nang = 256;
  const auto& levels = tail_levels();
  std::vector<double> vals(levels.size(), 0.0);
  for (int i = 0; i < nang; ++i) {
    const double a = 2.0 * kPi * i / nang;
    const double th[2] = {std::cos(a), std::sin(a)};
    const double rho = gauge_radius(chart, th);
    double t[3] = {0.0, 0.0, 0.0};
    t[chart.axes[0]] = rho * th[0];
    t[chart.axes[1]] = rho * th[1];
    // K(ω, z) + K(ω, -z) over z >= 0, accumulated level by level.
    auto f = [&](double z) {
      double p[3] = {t[0], t[1], t[2]};
      p[flat[0]] = z;
      const double up = K.eval(std::span<const double>(p, dim));
      p[flat[0]] = -z;
      return up + K.eval(std::span<const double>(p, dim));
    };
    double acc = quad_adaptive_1d(f, 0.0, 1.0, 1e-14);
    double prev = 1.0;
    for (std::size_t l = 0; l < levels.size(); ++l) {
      acc += quad_adaptive_1d(f, prev, levels[l], 1e-14);
      prev = levels[l];
      vals[l] += rho * rho * acc * 2.0 * kPi / nang;
    }
  }
  TailFit fit = extrapolate_tail(tail_levels(), vals);
  check_fit(fit, "levelset_cancellation");
  return fit;
}

double levelset_cancellation(const CZKernel& K, const LevelSetChart& chart) {
  return levelset_cancellation_detail(K, chart).extrapolated;
}

nlohmann::json FlattenCheck::to_json() const { return {{"lhs", lhs}, {"rhs", rhs}, {"lhs_fit", lhs_fit.to_json()}}; }

FlattenCheck flatten_identity_check(const CZKernel& K) {
  if (K.dim() != 3) throw InputError("flatten_identity_check: requires dim = 3");
  const int nang = 256;
  std::vector<double> cs(nang), sn(nang);
  for (int i = 0; i < nang; ++i) {
    cs[i] = std::cos(2.0 * kPi * i / nang);
    sn[i] = std::sin(2.0 * kPi * i / nang);
  }
  // Angular sum at radius s; the integrand is smooth and periodic in the angle.
  auto ring = [&](double s) {
    double acc = 0.0;
    for (int i = 0; i < nang; ++i) {
      const double t[3] = {s * cs[i], s * sn[i], 1.0};
      acc += K.eval(t);
    }
    return s * acc * 2.0 * kPi / nang;
  };
  std::vector<double> vals;
  double acc = quad_adaptive_1d(ring, 0.0, 1.0, 1e-14);
  double prev = 1.0;
  for (double Z : tail_levels()) {
    acc += quad_adaptive_1d(ring, prev, Z, 1e-14);
    prev = Z;
    vals.push_back(acc);
  }
  FlattenCheck out;
  out.lhs_fit = extrapolate_tail(tail_levels(), vals);
  check_fit(out.lhs_fit, "flatten_identity_check");
  out.lhs = out.lhs_fit.extrapolated;
  const double e3[3] = {0.0, 0.0, 1.0};
  out.rhs = hemisphere_sphere_integral(3, e3, [&](std::span<const double> th) { return K.omega(th); }, 1e-12);
  return out;
}

}  // namespace czlab
