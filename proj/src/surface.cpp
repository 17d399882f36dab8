#include "czlab/surface.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "czlab/errors.hpp"
#include "czlab/ladder.hpp"
#include "czlab/quadrature.hpp"

namespace czlab {

void PolySurface::gradient(std::span<const double> x, std::span<double> g) const {
  const auto v = p_.grad(x);
  std::copy(v.begin(), v.end(), g.begin());
}

void PolySurface::hessian(std::span<const double> x, std::span<double> h) const {
  const auto v = p_.hessian(x);
  std::copy(v.begin(), v.end(), h.begin());
}

namespace {

constexpr int kAlphaTable = 4096;
constexpr double kInner = 0.5;

double smoothstep5(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double circle_g2(double u) { return std::pow(1.0 + u * u, -1.5); }

}  // namespace

AlphaCurve::AlphaCurve(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("wwz-alpha: alpha must be positive");
  const double tol = 1e-15;
  const double num = quad_adaptive_1d([&](double s) { return s * blend_weight(s) * circle_g2(s); }, 0.0, kInner, tol);
  const double den = quad_adaptive_1d([&](double s) { return s * blend_weight(s) * flat(s); }, 0.0, kInner, tol);
  if (!(den > 0.0)) throw NumericError("wwz-alpha: flat factor underflows on the blend region");
  c_ = num / den;
  b_ = quad_adaptive_1d([&](double s) { return G2(s) - circle_g2(s); }, 0.0, kInner, tol);

  h_ = kInner / kAlphaTable;
  g0_.assign(kAlphaTable + 1, 0.0);
  g1_.assign(kAlphaTable + 1, 0.0);
  g0_[0] = 1.0;
  std::vector<double> xs, ws;
  gauss_legendre(10, xs, ws);
  for (int i = 0; i < kAlphaTable; ++i) {
    const double a = i * h_, b = (i + 1) * h_;
    double i1 = 0.0, i2 = 0.0;
    for (std::size_t q = 0; q < xs.size(); ++q) {
      const double s = 0.5 * (a + b) + 0.5 * h_ * xs[q];
      const double w = 0.5 * h_ * ws[q] * G2(s);
      i1 += w;
      i2 += w * (b - s);
    }
    g1_[i + 1] = g1_[i] + i1;
    g0_[i + 1] = g0_[i] + h_ * g1_[i] + i2;
  }
}

double AlphaCurve::flat(double u) const {
  if (u <= 0.0) return 0.0;
  return std::exp(-std::pow(std::sqrt(1.0 + 1.0 / (u * u)), alpha_));
}

double AlphaCurve::blend_weight(double u) const { return 1.0 - smoothstep5((u - 0.25) / 0.25); }

double AlphaCurve::G2(double u) const {
  u = std::abs(u);
  const double w = blend_weight(u);
  return (1.0 - w) * circle_g2(u) + w * c_ * flat(u);
}

namespace {

struct Hermite {
  double t, h;
  double f0, f1, d0, d1, s0, s1;
  double value() const {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5, H1 = t - 6 * t3 + 8 * t4 - 3 * t5,
                 H2 = 0.5 * (t2 - 3 * t3 + 3 * t4 - t5), H3 = 0.5 * (t3 - 2 * t4 + t5),
                 H4 = -4 * t3 + 7 * t4 - 3 * t5, H5 = 10 * t3 - 15 * t4 + 6 * t5;
    return f0 * H0 + h * d0 * H1 + h * h * s0 * H2 + h * h * s1 * H3 + h * d1 * H4 + f1 * H5;
  }
  double deriv() const {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
    const double H0 = -30 * t2 + 60 * t3 - 30 * t4, H1 = 1 - 18 * t2 + 32 * t3 - 15 * t4,
                 H2 = 0.5 * (2 * t - 9 * t2 + 12 * t3 - 5 * t4), H3 = 0.5 * (3 * t2 - 8 * t3 + 5 * t4),
                 H4 = -12 * t2 + 28 * t3 - 15 * t4, H5 = 30 * t2 - 60 * t3 + 30 * t4;
    return (f0 * H0 + h * d0 * H1 + h * h * s0 * H2 + h * h * s1 * H3 + h * d1 * H4 + f1 * H5) / h;
  }
};

}  // namespace

double AlphaCurve::G(double u) const {
  u = std::abs(u);
  if (u > kInner) return std::sqrt(1.0 + u * u) + b_ * u;
  const int i = std::min(static_cast<int>(u / h_), kAlphaTable - 1);
  const double a = i * h_;
  const Hermite H{(u - a) / h_, h_, g0_[i], g0_[i + 1], g1_[i], g1_[i + 1], G2(a), G2(a + h_)};
  return H.value();
}

double AlphaCurve::G1(double u) const {
  const double s = u < 0.0 ? -1.0 : 1.0;
  u = std::abs(u);
  if (u > kInner) return s * (u / std::sqrt(1.0 + u * u) + b_);
  const int i = std::min(static_cast<int>(u / h_), kAlphaTable - 1);
  const double a = i * h_;
  const Hermite H{(u - a) / h_, h_, g0_[i], g0_[i + 1], g1_[i], g1_[i + 1], G2(a), G2(a + h_)};
  return s * H.deriv();
}

double AlphaCurve::value(std::span<const double> p) const {
  const double x = p[0], y = p[1];
  const double ax = std::abs(x), ay = std::abs(y);
  if (ax <= 0.5 * ay) return ay * G(ax / ay);
  return std::hypot(x, y) + b_ * ax;
}

void AlphaCurve::gradient(std::span<const double> p, std::span<double> g) const {
  const double x = p[0], y = p[1];
  const double ax = std::abs(x), ay = std::abs(y);
  const double sx = x < 0.0 ? -1.0 : 1.0, sy = y < 0.0 ? -1.0 : 1.0;
  if (ax <= 0.5 * ay) {
    const double u = ax / ay;
    const double d = G1(u);
    g[0] = sx * d;
    g[1] = sy * (G(u) - u * d);
    return;
  }
  const double r = std::hypot(x, y);
  g[0] = x / r + b_ * sx;
  g[1] = y / r;
}

void AlphaCurve::hessian(std::span<const double> p, std::span<double> h) const {
  const double x = p[0], y = p[1];
  const double ax = std::abs(x), ay = std::abs(y);
  if (ax <= 0.5 * ay) {
    const double u = ax / ay;
    const double sx = x < 0.0 ? -1.0 : 1.0, sy = y < 0.0 ? -1.0 : 1.0;
    const double k = G2(u) / ay;
    h[0] = k;
    h[1] = h[2] = -sx * sy * k * u;
    h[3] = k * u * u;
    return;
  }
  const double r = std::hypot(x, y);
  const double r3 = r * r * r;
  h[0] = y * y / r3;
  h[1] = h[2] = -x * y / r3;
  h[3] = x * x / r3;
}

nlohmann::json SurfaceSpec::to_json() const {
  nlohmann::json j = psi->to_json();
  j["name"] = name;
  j["dim"] = dim();
  j["phi"] = phi.to_json();
  if (phi_bar) j["phi_bar"] = phi_bar->to_json();
  return j;
}

ConvexityReport convexity_check(const SurfaceFunction& psi, double eig_tol) {
  const int d = psi.dim();
  ConvexityReport rep;
  rep.min_eigenvalue = INFINITY;
  std::vector<double> h(d * d);
  auto probe = [&](const std::vector<double>& x) {
    double n2 = 0.0;
    for (double v : x) n2 += v * v;
    if (n2 > 1.0 + 1e-12) return;
    if (psi.is_gauge() && n2 < 1e-6) return;
    psi.hessian(x, h);
    Eigen::MatrixXd H(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) H(a, b) = h[a * d + b];
    const double ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H, Eigen::EigenvaluesOnly).eigenvalues()(0);
    ++rep.samples;
    if (ev < rep.min_eigenvalue) {
      rep.min_eigenvalue = ev;
      rep.witness = x;
    }
  };
  const int n = 17;
  std::vector<int> idx(d, 0);
  while (true) {
    std::vector<double> x(d);
    for (int i = 0; i < d; ++i) x[i] = -1.0 + 2.0 * idx[i] / (n - 1);
    probe(x);
    int k = 0;
    while (k < d && ++idx[k] == n) idx[k++] = 0;
    if (k == d) break;
  }
  std::mt19937_64 rng(0x5eedc0deULL);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int drawn = 0;
  while (drawn < 1000) {
    std::vector<double> x(d);
    double n2 = 0.0;
    for (double& v : x) {
      v = u(rng);
      n2 += v * v;
    }
    if (n2 > 1.0) continue;
    probe(x);
    ++drawn;
  }
  rep.convex = rep.min_eigenvalue >= -eig_tol;
  return rep;
}

MultiPoly registry_polynomial(const std::string& name, int dim) {
  auto mono = [](MultiPoly& p, Exponent e) { p.add_term(e, 1.0); };
  if (name == "paraboloid") {
    if (dim < 2 || dim > 3) throw InputError("paraboloid: dim must be 2 or 3");
    MultiPoly p(dim);
    for (int i = 0; i < dim; ++i) {
      Exponent e(dim, 0);
      e[i] = 2;
      mono(p, e);
    }
    return p;
  }
  if (name == "wwz-thm1") {
    MultiPoly p(3);
    mono(p, {2, 0, 0});
    mono(p, {0, 2, 0});
    mono(p, {0, 0, 4});
    return p;
  }
  if (name == "wwz-thm2") {
    MultiPoly p(3);
    mono(p, {2, 0, 0});
    mono(p, {0, 4, 0});
    mono(p, {0, 0, 4});
    return p;
  }
  throw InputError("unknown registry surface: " + name);
}

std::shared_ptr<const SurfaceFunction> make_surface_function(const nlohmann::json& j, std::string* name) {
  try {
    std::shared_ptr<const SurfaceFunction> out;
    std::string nm;
    if (j.is_string()) return make_surface_function(nlohmann::json{{"name", j.get<std::string>()}}, name);
    if (j.contains("poly")) {
      MultiPoly p = MultiPoly::from_json(j.at("poly"));
      nm = j.value("name", std::string("inline"));
      if (j.contains("rotation")) {
        const auto M = j.at("rotation").get<std::vector<std::vector<double>>>();
        const int d = p.dim();
        if (static_cast<int>(M.size()) != d) throw InputError("rotation: wrong size");
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            double s = 0.0;
            for (int k = 0; k < d; ++k) s += M.at(a).at(k) * M.at(b).at(k);
            if (std::abs(s - (a == b ? 1.0 : 0.0)) > 1e-10) throw InputError("rotation: matrix is not orthogonal");
          }
        p = p.compose_linear(M);
      }
      if (p.dim() < 2 || p.dim() > 3) throw InputError("surface: dim must be 2 or 3");
      for (const auto& [e, c] : p.terms()) {
        int deg = 0;
        for (int k : e) deg += k;
        if (deg < 2) throw InputError("surface: ψ must satisfy ψ(0) = 0 and ∇ψ(0) = 0");
      }
      out = std::make_shared<PolySurface>(std::move(p));
    } else {
      nm = j.at("name").get<std::string>();
      if (nm == "wwz-alpha") {
        if (j.contains("rotation")) throw InputError("wwz-alpha: rotation is not supported");
        out = std::make_shared<AlphaCurve>(j.at("alpha").get<double>());
      } else {
        const int dim = j.value("dim", 3);
        MultiPoly p = registry_polynomial(nm, dim);
        if (j.contains("rotation")) {
          nlohmann::json inl = {{"poly", p.to_json()}, {"rotation", j.at("rotation")}, {"name", nm}};
          return make_surface_function(inl, name);
        }
        out = std::make_shared<PolySurface>(std::move(p));
      }
    }
    const ConvexityReport cr = convexity_check(*out);
    if (!cr.convex) {
      std::string w;
      for (double v : cr.witness) w += std::to_string(v) + " ";
      throw ConvexityError("surface " + nm + " is not convex: Hessian eigenvalue " +
                           std::to_string(cr.min_eigenvalue) + " at " + w);
    }
    if (name) *name = nm;
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("surface JSON: ") + e.what());
  }
}

SurfaceSpec make_surface(const nlohmann::json& surface, const nlohmann::json& phi, const nlohmann::json& phi_bar) {
  SurfaceSpec s;
  s.psi = make_surface_function(surface, &s.name);
  if (!phi.is_null() && !phi_bar.is_null()) throw InputError("give either phi or phi_bar, not both");
  std::optional<int> ell0;
  if (s.poly()) ell0 = flatness_ladder(*s.poly()).ell0;
  if (!phi_bar.is_null()) {
    if (!ell0) throw InputError("phi_bar needs a surface with a computable flatness ladder");
    s.phi_bar = Profile::from_json(phi_bar);
    s.phi = Profile::compose_power(*s.phi_bar, 1.0 / *ell0);
  } else {
    s.phi = phi.is_null() ? Profile::identity() : Profile::from_json(phi);
    if (ell0) s.phi_bar = Profile::compose_power(s.phi, static_cast<double>(*ell0));
  }
  return s;
}

}  // namespace czlab
