#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ijack/bounds.hpp"
#include "ijack/mc.hpp"

namespace ijack::cli {

struct McSection {
  std::uint64_t seed = 0;
  std::size_t outer_samples = 0;
  std::size_t inner_pairs = 0;
  std::vector<int> ks;
  std::vector<McEstimate> EJ;  // parallel to ks
  std::vector<McEstimate> EK;  // parallel to ks
  McEstimate var;
  std::vector<EstimatedBracket> brackets;
};

struct Report {
  std::string version;
  std::string engine;
  std::optional<std::uint64_t> seed;
  double wall_time_s = 0.0;
  int n = 0;
  std::uint64_t outcomes = 0;  // 0 when not enumerable
  std::string statistic;
  std::optional<BoundsReport> exact;
  std::optional<McSection> mc;
};

nlohmann::json to_json(const Report& report);
/// Inverse of to_json; throws nlohmann::json exceptions on malformed input.
Report report_from_json(const nlohmann::json& j);

/// Bracket table, one row per p: p,lower_J,lower_JK,var,upper_JK,upper_J.
/// Uses the exact values when present, Monte Carlo point estimates otherwise.
std::string bracket_csv(const Report& report);

bool operator==(const McSection& a, const McSection& b);
bool operator==(const Report& a, const Report& b);

}  // namespace ijack::cli
