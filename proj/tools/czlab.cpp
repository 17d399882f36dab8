#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "czlab/commands.hpp"
#include "czlab/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"czlab: oscillatory singular integrals along convex finite-type hypersurfaces"};
  app.require_subcommand(1);
  czlab::CommandContext ctx;
  ctx.workers = czlab::default_workers();
  const char* names[][2] = {
      {"analyze-surface", "flatness ladder and normal form of a surface"},
      {"check-kernel", "annulus, hemisphere, level-set and flatten cancellation of a kernel"},
      {"sweep", "truncated multiplier sweep with a bounded/log-growth verdict"},
      {"dichotomy", "cancellation, doubling and necessity-sequence analysis"},
      {"theorem5", "logarithmic integrability of cap measures"},
      {"decay", "Fourier decay of the dyadic surface measures"},
      {"det-identity", "rank-one determinant identity property suite"},
  };
  for (const auto& n : names) {
    CLI::App* sub = app.add_subcommand(n[0], n[1]);
    sub->add_option("--config", ctx.config_path, "JSON config path");
    sub->add_option("--out", ctx.out_dir, "output directory")->capture_default_str();
    sub->add_option("--workers", ctx.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_flag("--verbose", ctx.verbose, "verbose diagnostics");
    sub->callback([&ctx, name = std::string(n[0])] { ctx.subcommand = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return czlab::kExitInvalid;
  }
  return czlab::run_command(ctx, std::cout, std::cerr);
}
