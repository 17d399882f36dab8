#include "czlab/multipoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "czlab/errors.hpp"

namespace czlab {

namespace {

int total(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

// pw[i * (max_exp + 1) + k] = x_i^k
std::vector<double> power_table(std::span<const double> x, int max_exp) {
  const int stride = max_exp + 1;
  std::vector<double> pw(x.size() * stride);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v = 1.0;
    for (int k = 0; k <= max_exp; ++k) {
      pw[i * stride + k] = v;
      v *= x[i];
    }
  }
  return pw;
}

}  // namespace

bool GradedLex::operator()(const Exponent& a, const Exponent& b) const {
  const int ta = total(a), tb = total(b);
  if (ta != tb) return ta < tb;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

MultiPoly::MultiPoly(int dim) : dim_(dim) {
  if (dim < 1) throw InputError("MultiPoly: dim must be positive");
}

int MultiPoly::degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, total(e));
  return d;
}

double MultiPoly::coef(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

void MultiPoly::add_term(const Exponent& e, double c) {
  if (static_cast<int>(e.size()) != dim_)
    throw InputError("MultiPoly: exponent length " + std::to_string(e.size()) + " != dim " +
                     std::to_string(dim_));
  for (int k : e)
    if (k < 0) throw InputError("MultiPoly: negative exponent");
  if (!std::isfinite(c)) throw InputError("MultiPoly: non-finite coefficient");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
  rebuild_cache();
}

void MultiPoly::rebuild_cache() {
  flat_.assign(terms_.begin(), terms_.end());
  max_exp_ = 0;
  for (const auto& [e, c] : flat_)
    for (int k : e) max_exp_ = std::max(max_exp_, k);
}

void MultiPoly::check_point(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw InputError("MultiPoly: point has length " + std::to_string(x.size()) + ", expected " +
                     std::to_string(dim_));
}

double MultiPoly::eval(std::span<const double> x) const {
  check_point(x);
  const int stride = max_exp_ + 1;
  const auto pw = power_table(x, max_exp_);
  double s = 0.0;
  for (const auto& [e, c] : flat_) {
    double m = c;
    for (int i = 0; i < dim_; ++i) m *= pw[i * stride + e[i]];
    s += m;
  }
  return s;
}

std::vector<double> MultiPoly::grad(std::span<const double> x) const {
  check_point(x);
  const int stride = max_exp_ + 1;
  const auto pw = power_table(x, max_exp_);
  std::vector<double> g(dim_, 0.0);
  for (const auto& [e, c] : flat_) {
    for (int j = 0; j < dim_; ++j) {
      if (e[j] == 0) continue;
      double m = c * e[j];
      for (int i = 0; i < dim_; ++i) m *= pw[i * stride + (i == j ? e[i] - 1 : e[i])];
      g[j] += m;
    }
  }
  return g;
}

std::vector<double> MultiPoly::hessian(std::span<const double> x) const {
  check_point(x);
  const int stride = max_exp_ + 1;
  const auto pw = power_table(x, max_exp_);
  std::vector<double> h(dim_ * dim_, 0.0);
  for (const auto& [e, c] : flat_) {
    for (int a = 0; a < dim_; ++a) {
      for (int b = a; b < dim_; ++b) {
        Exponent f = e;
        double m = c;
        m *= f[a];
        f[a] -= 1;
        if (f[a] < 0) continue;
        m *= f[b];
        f[b] -= 1;
        if (f[b] < 0 || m == 0.0) continue;
        for (int i = 0; i < dim_; ++i) m *= pw[i * stride + f[i]];
        h[a * dim_ + b] += m;
      }
    }
  }
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < a; ++b) h[a * dim_ + b] = h[b * dim_ + a];
  return h;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  if (o.dim_ != dim_) throw InputError("MultiPoly: dimension mismatch in +");
  MultiPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + o.scaled(-1.0); }

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  if (o.dim_ != dim_) throw InputError("MultiPoly: dimension mismatch in *");
  MultiPoly r(dim_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      Exponent e(dim_);
      for (int i = 0; i < dim_; ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

MultiPoly MultiPoly::scaled(double s) const {
  MultiPoly r(dim_);
  for (const auto& [e, c] : terms_) r.add_term(e, c * s);
  return r;
}

MultiPoly MultiPoly::homogeneous_part(int deg) const {
  MultiPoly r(dim_);
  for (const auto& [e, c] : terms_)
    if (total(e) == deg) r.add_term(e, c);
  return r;
}

MultiPoly MultiPoly::truncated(int deg) const {
  MultiPoly r(dim_);
  for (const auto& [e, c] : terms_)
    if (total(e) <= deg) r.add_term(e, c);
  return r;
}

MultiPoly MultiPoly::restrict_zero(const std::vector<int>& axes) const {
  MultiPoly r(dim_);
  for (const auto& [e, c] : terms_) {
    bool keep = true;
    for (int a : axes)
      if (e.at(a) > 0) keep = false;
    if (keep) r.add_term(e, c);
  }
  return r;
}

MultiPoly MultiPoly::compose_linear(const std::vector<std::vector<double>>& M, double drop_rel) const {
  if (static_cast<int>(M.size()) != dim_)
    throw InputError("compose_linear: matrix row count must equal dim");
  std::vector<MultiPoly> rows;
  for (const auto& row : M) {
    if (static_cast<int>(row.size()) != dim_)
      throw InputError("compose_linear: matrix must be square");
    MultiPoly l(dim_);
    for (int j = 0; j < dim_; ++j) {
      Exponent e(dim_, 0);
      e[j] = 1;
      l.add_term(e, row[j]);
    }
    rows.push_back(l);
  }
  MultiPoly one(dim_);
  one.add_term(Exponent(dim_, 0), 1.0);
  MultiPoly out(dim_);
  for (const auto& [e, c] : terms_) {
    MultiPoly m = one.scaled(c);
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < e[i]; ++k) m = m * rows[i];
    out = out + m;
  }
  double mx = 0.0;
  for (const auto& [e, c] : out.terms_) mx = std::max(mx, std::abs(c));
  MultiPoly cleaned(dim_);
  for (const auto& [e, c] : out.terms_)
    if (std::abs(c) > drop_rel * mx) cleaned.add_term(e, c);
  return cleaned;
}

nlohmann::json MultiPoly::to_json() const {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : terms_) terms.push_back({{"exp", e}, {"coef", c}});
  return {{"dim", dim_}, {"terms", terms}};
}

MultiPoly MultiPoly::from_json(const nlohmann::json& j) {
  try {
    MultiPoly p(j.at("dim").get<int>());
    for (const auto& t : j.at("terms")) p.add_term(t.at("exp").get<Exponent>(), t.at("coef").get<double>());
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("MultiPoly JSON: ") + e.what());
  }
}

double poly_eval(const MultiPoly& p, std::span<const double> x) { return p.eval(x); }

}  // namespace czlab
