#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

namespace czlab {

struct RankOneMatrixSpec {
  int r = 1;
  double c = 0.0;
  double b = 0.0;
  std::vector<double> s;
  std::vector<double> t;
};

// det(c I + b s t^T) = c^r + c^(r-1) b (s . t), evaluated in closed form.
double det_rank_one_update(const RankOneMatrixSpec& spec);

// Determinant of the assembled r x r matrix by partial-pivot LU.
double dense_rank_one_determinant(const RankOneMatrixSpec& spec);

struct DetSuiteReport {
  int instances = 0;
  int failures = 0;
  double worst_rel_error = 0.0;
  int family_instances = 0;
  int family_failures = 0;
  double worst_family_rel_error = 0.0;
  bool pass() const { return failures == 0 && family_failures == 0; }
  nlohmann::json to_json() const;
};

// Seeded property suite: random (r <= 6, c, b, s, t) against the LU determinant, plus the
// (c = 1 - |s|^2, t = s, b = 1) family against (1 - |s|^2)^(r - 1).
DetSuiteReport run_det_identity_suite(std::uint64_t seed, int instances = 200, double rel_tol = 1e-10);

}  // namespace czlab
