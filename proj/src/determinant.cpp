#include "czlab/determinant.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "czlab/errors.hpp"

namespace czlab {

namespace {

void validate(const RankOneMatrixSpec& spec) {
  if (spec.r < 1) throw InputError("RankOneMatrixSpec: r must be >= 1");
  if (static_cast<int>(spec.s.size()) != spec.r || static_cast<int>(spec.t.size()) != spec.r)
    throw InputError("RankOneMatrixSpec: s and t must have length r");
  if (!std::isfinite(spec.c) || !std::isfinite(spec.b))
    throw InputError("RankOneMatrixSpec: non-finite scalar");
}

double rel_err(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace

double det_rank_one_update(const RankOneMatrixSpec& spec) {
  validate(spec);
  double dot = 0.0;
  for (int j = 0; j < spec.r; ++j) dot += spec.s[j] * spec.t[j];
  const double cr1 = std::pow(spec.c, spec.r - 1);
  return cr1 * spec.c + cr1 * spec.b * dot;
}

double dense_rank_one_determinant(const RankOneMatrixSpec& spec) {
  validate(spec);
  Eigen::MatrixXd A = spec.c * Eigen::MatrixXd::Identity(spec.r, spec.r);
  for (int i = 0; i < spec.r; ++i)
    for (int j = 0; j < spec.r; ++j) A(i, j) += spec.b * spec.s[i] * spec.t[j];
  return Eigen::PartialPivLU<Eigen::MatrixXd>(A).determinant();
}

nlohmann::json DetSuiteReport::to_json() const {
  return {{"instances", instances},
          {"failures", failures},
          {"worst_rel_error", worst_rel_error},
          {"family_instances", family_instances},
          {"family_failures", family_failures},
          {"worst_family_rel_error", worst_family_rel_error},
          {"pass", pass()}};
}

DetSuiteReport run_det_identity_suite(std::uint64_t seed, int instances, double rel_tol) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> rdist(1, 6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DetSuiteReport rep;
  for (int k = 0; k < instances; ++k) {
    RankOneMatrixSpec sp;
    sp.r = rdist(rng);
    sp.c = 0.25 + 1.75 * (0.5 * (u(rng) + 1.0));
    sp.b = 2.0 * u(rng);
    for (int j = 0; j < sp.r; ++j) {
      sp.s.push_back(u(rng));
      sp.t.push_back(u(rng));
    }
    const double e = rel_err(det_rank_one_update(sp), dense_rank_one_determinant(sp));
    ++rep.instances;
    rep.worst_rel_error = std::max(rep.worst_rel_error, e);
    if (!(e <= rel_tol)) ++rep.failures;

    RankOneMatrixSpec fam;
    fam.r = sp.r;
    double n2 = 0.0;
    for (int j = 0; j < fam.r; ++j) {
      const double v = 0.9 * u(rng) / std::sqrt(static_cast<double>(fam.r));
      fam.s.push_back(v);
      n2 += v * v;
    }
    fam.t = fam.s;
    fam.c = 1.0 - n2;
    fam.b = 1.0;
    const double fe = rel_err(det_rank_one_update(fam), std::pow(1.0 - n2, fam.r - 1));
    ++rep.family_instances;
    rep.worst_family_rel_error = std::max(rep.worst_family_rel_error, fe);
    if (!(fe <= rel_tol)) ++rep.family_failures;
  }
  return rep;
}

}  // namespace czlab
