#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "config.hpp"

namespace fibercos::cli {

enum ExitCode : int { kOk = 0, kAcceptanceFailure = 1, kConfigError = 2, kNumericalInconsistency = 3 };

struct CommandResult {
  int exit_code = kOk;
  std::string report;
  std::string csv;
  /// Diagnostic for stderr when exit_code != kOk.
  std::string error;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;
  ToleranceOverrides tolerances;  ///< command-line overrides, applied after the config's
};

CommandResult run_angle(const InstanceConfig& config, const RunOptions& options = {});
CommandResult run_closedness(const InstanceConfig& config, const RunOptions& options = {});
CommandResult run_frame_bounds(const InstanceConfig& config, const RunOptions& options = {});
CommandResult run_sampling(const InstanceConfig& config, const RunOptions& options = {});
CommandResult run_union(const InstanceConfig& config, const RunOptions& options = {});
CommandResult run_crosscheck(const CrosscheckOptions& options);

/// 17 significant digits, shortest `%g` form.
std::string format_real(double v);

/// CSV for an angle profile with the fixed column order
/// fiber_index,x_value,dim_J_A,dim_J_B,angle,in_omega,in_omega_prime.
std::string angle_profile_csv(const AngleProfile& profile);

}  // namespace fibercos::cli
