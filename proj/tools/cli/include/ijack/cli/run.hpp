#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "ijack/cli/config.hpp"
#include "ijack/cli/report.hpp"

namespace ijack::cli {

struct RunOptions {
  std::filesystem::path config;
  std::optional<Engine> engine;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
  std::optional<unsigned> threads;
};

/// Runs the configured engines on one instance. `engine_override` and
/// `seed_override` replace the config's values; when Monte Carlo is requested
/// without an "mc" section the McConfig defaults are used.
Report run_instance(const InstanceConfig& config, std::optional<Engine> engine_override = {},
                    std::optional<std::uint64_t> seed_override = {}, std::optional<unsigned> threads = {});

/// `run` subcommand: 0 on success, 1 on config/schema errors (message on `err`).
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

}  // namespace ijack::cli
