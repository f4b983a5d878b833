#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace fibercos::cli;

struct CommonFlags {
  std::string config;
  std::string csv;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol_rank, tol_intersect, tol_close;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool needs_config) {
  auto* opt = cmd->add_option("--config", f.config, "instance config (JSON)");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--csv", f.csv, "write per-fiber CSV to PATH");
  cmd->add_option("--seed", f.seed, "seed for random instances");
  cmd->add_option("--tol-rank", f.tol_rank, "relative rank cutoff");
  cmd->add_option("--tol-intersect", f.tol_intersect, "intersection threshold");
  cmd->add_option("--tol-close", f.tol_close, "closedness threshold");
  cmd->add_flag("--quiet", f.quiet, "suppress the report on stdout");
}

int emit(const CommandResult& result, const CommonFlags& f) {
  if (!f.quiet && !result.report.empty()) std::cout << result.report;
  if (!f.csv.empty() && !result.csv.empty()) {
    std::ofstream out(f.csv, std::ios::binary);
    out << result.csv;
    if (!out) {
      std::cerr << "error: cannot write " << f.csv << "\n";
      return kConfigError;
    }
  }
  if (!result.error.empty()) std::cerr << "error: " << result.error << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Angles, closedness and sampling injectivity for finitely generated invariant spaces"};
  app.require_subcommand(1);

  CommonFlags flags;
  using Runner = CommandResult (*)(const InstanceConfig&, const RunOptions&);
  struct Command {
    const char* name;
    const char* blurb;
    Runner run;
  };
  const Command commands[] = {
      {"angle", "supremum cosine angle between sets A and B", run_angle},
      {"closedness", "is A + B closed; witnesses over the non-intersecting fibers", run_closedness},
      {"frame-bounds", "per-fiber frame bounds of A (and B)", run_frame_bounds},
      {"sampling", "is sampling with `measuring` one-to-one on the target", run_sampling},
      {"union", "injectivity on a union of target spaces", run_union},
  };
  for (const auto& c : commands) add_common(app.add_subcommand(c.name, c.blurb), flags, true);

  fibercos::CrosscheckOptions cc;
  auto* cross = app.add_subcommand("crosscheck", "fiberwise pipeline against the dense oracle on seeded instances");
  add_common(cross, flags, false);
  cross->add_option("--angle-instances", cc.angle_instances);
  cross->add_option("--injectivity-instances", cc.injectivity_instances);
  cross->add_option("--min-order", cc.min_order);
  cross->add_option("--max-order", cc.max_order);
  cross->add_option("--max-generators", cc.max_generators);
  cross->add_option("--max-angle-dev", cc.angle_tolerance, "allowed |fiberwise - dense| angle gap");
  cross->add_option("--max-route-dev", cc.route_tolerance, "allowed basis/Gramian route gap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfigError;
  }

  ToleranceOverrides overrides{flags.tol_rank, flags.tol_intersect, flags.tol_close};

  if (cross->parsed()) {
    if (flags.seed) cc.seed = *flags.seed;
    try {
      cc.tol = overrides.apply({});
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kConfigError;
    }
    return emit(run_crosscheck(cc), flags);
  }

  for (const auto& c : commands) {
    if (!app.got_subcommand(c.name)) continue;
    InstanceConfig config;
    try {
      config = load_config(flags.config);
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kConfigError;
    }
    return emit(c.run(config, RunOptions{flags.seed, overrides}), flags);
  }
  return kConfigError;
}
