#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fibercos/fibercos.hpp"

namespace fibercos::cli {

/// Malformed or unresolvable instance configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Realization { FiniteGroup, RealLine };

/// Reproduces one crosscheck instance from (seed, family, index).
struct RandomInstanceSpec {
  InstanceFamily family = InstanceFamily::Angle;
  std::size_t index = 0;
  std::size_t min_order = 4;
  std::size_t max_order = 64;
  std::size_t max_generators = 3;
};

struct ToleranceOverrides {
  std::optional<double> rank;
  std::optional<double> intersect;
  std::optional<double> close;

  /// Fields set here replace those of `base`.
  RankTolerance apply(RankTolerance base) const;
};

/// A set of generators, either explicit vectors on Z_N or Fourier profiles.
struct SetSpec {
  std::vector<CVector> vectors;
  std::vector<FourierProfile> profiles;

  std::size_t size() const noexcept { return vectors.size() + profiles.size(); }
};

/// Upper limits on list sizes accepted from a config.
inline constexpr std::size_t kMaxGeneratorsPerSet = 64;
inline constexpr std::size_t kMaxTargets = 16;

struct InstanceConfig {
  Realization realization = Realization::FiniteGroup;

  // finite-group
  std::optional<FiniteGroupPair> pair;
  std::optional<RandomInstanceSpec> random_instance;
  std::optional<std::uint64_t> seed;

  // real-line
  std::size_t grid_size = 0;
  std::size_t truncation = 64;
  GridRule grid_rule = GridRule::Midpoint;

  std::map<std::string, SetSpec> sets;
  std::optional<std::string> a, b, measuring;
  std::vector<std::string> targets;
  ToleranceOverrides tolerances;

  /// Generators of a named set on the configured fiber grid.
  FiberedGeneratorSet fibered(const std::string& name) const;
  const SetSpec& set(const std::string& name) const;

  /// Materializes `random_instance` into sets and roles using `seed`.
  void resolve_random_instance(std::uint64_t seed);

  std::string describe() const;
};

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// Parses a JSON document; relative custom-table paths resolve against base_dir.
InstanceConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
InstanceConfig load_config(const std::filesystem::path& path);

}  // namespace fibercos::cli
