#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "czlab/multipoly.hpp"

namespace czlab {

struct LadderLevel {
  int ell = 1;
  // Orthonormal basis of E_ell as row vectors; empty for {0}.
  std::vector<std::vector<double>> basis;
  bool operator==(const LadderLevel&) const = default;
};

struct FlatnessLadder {
  int dim = 0;
  std::vector<LadderLevel> levels;  // ell = 1, 2, ..., up to the first level equal to {0}
  int ell0 = 0;
  int codim = 0;
  std::optional<std::vector<double>> normal_v;
  // Lowest pure-power order of ψ along each coordinate axis.
  std::vector<int> axis_order;

  nlohmann::json to_json() const;
  static FlatnessLadder from_json(const nlohmann::json& j);
  bool operator==(const FlatnessLadder&) const = default;
};

// Monomial-support analysis per coordinate axis, followed by a sampled check that no direction
// outside the claimed axis-aligned E_ell is flat.
FlatnessLadder flatness_ladder(const MultiPoly& psi);

}  // namespace czlab
