#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "czlab/cap_measure.hpp"

namespace czlab {

enum ExitCode : int {
  kExitOk = 0,
  kExitMismatch = 1,
  kExitInvalid = 2,
  kExitFiniteType = 3,
  kExitInconclusive = 4,
  kExitConvergence = 5,
};

struct CommandContext {
  std::string subcommand;
  std::string config_path;  // may be empty for det-identity
  std::string out_dir = ".";
  int workers = 1;
  bool verbose = false;
};

// Runs one subcommand and returns its exit code; diagnostics go to err, summaries to out.
int run_command(const CommandContext& ctx, std::ostream& out, std::ostream& err);

// finite: every ratio from band `first_band` on is <= 0.9; divergent: every such ratio >= 0.95.
std::string theorem5_verdict(const Theorem5Report& rep, std::size_t first_band = 6);

// Default starting points t0 for the cap-measure sup: angles around the flat direction.
std::vector<double> default_theta0_grid();

// One-line summary printed by analyze-surface, e.g. "ell0=2 codim=1 theorem=2 v=(1,0,0)".
std::string surface_summary(const nlohmann::json& surface_config);

}  // namespace czlab
