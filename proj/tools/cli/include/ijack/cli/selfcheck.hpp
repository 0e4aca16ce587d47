#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ijack/cli/config.hpp"
#include "ijack/jackknife.hpp"
#include "ijack/rng.hpp"

namespace ijack::cli {

/// Shape of randomized instances: a random table statistic with values in
/// [-1, 1] over n independent coordinates with random supports.
struct InstanceSpec {
  int min_n = 1;
  int max_n = 5;
  int min_support = 2;
  int max_support = 4;
  double min_prob = 0.05;
  /// Chance that a coordinate is replaced by a point mass.
  double point_mass_rate = 0.0;
  /// Chance that the statistic is a constant table.
  double constant_rate = 0.0;
};

InstanceConfig random_instance(SplitMix64& rng, const InstanceSpec& spec = {});
/// Instance number `index` of the stream selected by `seed`.
InstanceConfig random_instance(std::uint64_t seed, std::size_t index, const InstanceSpec& spec = {});

struct CheckSummary {
  std::string name;
  double max_residual = 0.0;  // relative to max(1, E S^2)
  double tolerance = 0.0;     // relative tolerance
  std::size_t failures = 0;
};

struct SelfcheckOptions {
  std::size_t instances = 200;
  std::uint64_t seed = 7;
  InstanceSpec spec{1, 5, 2, 4, 0.05, 0.1, 0.05};
  std::filesystem::path failure_path = "selfcheck_failure.json";
  /// Applied to the jackknife spectrum before the identity checks; lets a
  /// test confirm the battery notices a corrupted spectrum.
  std::function<void(JackknifeSpectrum&)> tamper;
};

struct SelfcheckResult {
  std::size_t instances = 0;
  std::vector<CheckSummary> checks;
  std::optional<std::size_t> first_failure;
  std::optional<InstanceConfig> failing_instance;
  std::string failure_detail;

  bool ok() const { return !first_failure.has_value(); }
};

/// Runs the randomized identity and inequality battery on one instance,
/// accumulating into `checks`. Returns a description of the first failed
/// check, or an empty string.
std::string check_instance(const InstanceConfig& instance, std::vector<CheckSummary>& checks,
                           const std::function<void(JackknifeSpectrum&)>& tamper = {});

SelfcheckResult run_selfcheck(const SelfcheckOptions& options);

/// `selfcheck` subcommand: prints the summary table; 0 when every residual is
/// within tolerance, 2 otherwise (the first failing instance is written to
/// options.failure_path).
int selfcheck(const SelfcheckOptions& options, std::ostream& out, std::ostream& err);

}  // namespace ijack::cli
