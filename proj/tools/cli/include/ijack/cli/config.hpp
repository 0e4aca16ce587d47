#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ijack/mc.hpp"
#include "ijack/model.hpp"

namespace ijack::cli {

enum class Engine { exact, mc, both };
enum class OutputFormat { json, csv, both };

const char* to_string(Engine e);
const char* to_string(OutputFormat f);
Engine parse_engine(std::string_view s);

inline bool uses_exact(Engine e) { return e != Engine::mc; }
inline bool uses_mc(Engine e) { return e != Engine::exact; }

/// A config/schema problem. what() is "<source>:<line>: <json pointer>: <problem>"
/// (the line is omitted when it cannot be located).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One problem instance as read from a config file.
///
/// {
///   "distributions": [{"support": [-1, 1], "probs": [0.5, 0.5]}, ...],
///   "statistic": {"kind": "table|sum|max|ustat2|poly", "params": {...}},
///   "engine": "exact|mc|both",
///   "mc": {"seed": 42, "outer_samples": 10000, "inner_pairs": 1,
///          "ks": [1, 2], "subset_mode": "auto|enumerate|sample", "threads": 1},
///   "bounds": {"p_values": "all" | [1, 2]},
///   "output": {"format": "json|csv|both", "path": "report.json"}
/// }
///
/// Statistic params: table {"values": [...]}, sum {"weights": [...]}, max {},
/// ustat2 {"g": [[x, g(x)], ...]} (optional, identity when absent),
/// poly {"terms": [{"coef": c, "exponents": [e_1, ..., e_n]}, ...]}.
/// Unknown keys are rejected. "mc" is required exactly when the engine uses
/// Monte Carlo.
struct InstanceConfig {
  std::vector<DiscreteDistribution> distributions;
  Statistic statistic;
  Engine engine = Engine::exact;
  std::optional<McConfig> mc;
  std::vector<int> p_values;  // empty means every valid p
  OutputFormat format = OutputFormat::json;
  std::string output_path;  // empty means stdout
};

InstanceConfig parse_config(std::string_view text, std::string_view source = "<config>");
InstanceConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const InstanceConfig& config);

/// 1-based line where the value at `pointer` starts in `text`, if found.
std::optional<int> locate_line(std::string_view text, std::string_view pointer);

}  // namespace ijack::cli
