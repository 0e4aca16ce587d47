#include "ijack/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace ijack::cli {

using nlohmann::json;

const char* to_string(Engine e) {
  switch (e) {
    case Engine::exact: return "exact";
    case Engine::mc: return "mc";
    case Engine::both: return "both";
  }
  return "?";
}

const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::json: return "json";
    case OutputFormat::csv: return "csv";
    case OutputFormat::both: return "both";
  }
  return "?";
}

Engine parse_engine(std::string_view s) {
  if (s == "exact") return Engine::exact;
  if (s == "mc") return Engine::mc;
  if (s == "both") return Engine::both;
  throw std::invalid_argument("engine must be exact, mc or both, got '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Line location: a minimal scanner that tracks the JSON pointer of every value
// it starts. Only called on text that already parsed successfully.

std::optional<int> locate_line(std::string_view text, std::string_view pointer) {
  struct Frame {
    bool object;
    std::size_t index = 0;
    std::string key;
    bool expect_key = true;
  };
  std::vector<Frame> stack;
  int line = 1;

  auto escape = [](const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  };
  auto current = [&] {
    std::string p;
    for (const auto& f : stack) p += "/" + (f.object ? escape(f.key) : std::to_string(f.index));
    return p;
  };
  auto read_string = [&](std::size_t& pos) {
    std::string s;
    ++pos;  // opening quote
    while (pos < text.size() && text[pos] != '"') {
      if (text[pos] == '\\' && pos + 1 < text.size()) {
        s += text[pos + 1];
        pos += 2;
      } else {
        if (text[pos] == '\n') ++line;
        s += text[pos++];
      }
    }
    ++pos;  // closing quote
    return s;
  };

  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (c == '\n') {
      ++line;
      ++pos;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
      continue;
    }
    if (c == ',') {
      if (!stack.empty()) {
        if (stack.back().object) stack.back().expect_key = true;
        else ++stack.back().index;
      }
      ++pos;
      continue;
    }
    if (c == ':') {
      if (!stack.empty()) stack.back().expect_key = false;
      ++pos;
      continue;
    }
    if (c == '}' || c == ']') {
      if (!stack.empty()) stack.pop_back();
      ++pos;
      continue;
    }
    if (c == '"' && !stack.empty() && stack.back().object && stack.back().expect_key) {
      stack.back().key = read_string(pos);
      continue;
    }
    // start of a value
    if (current() == pointer) return line;
    if (c == '{' || c == '[') {
      stack.push_back(Frame{c == '{', 0, {}, true});
      ++pos;
    } else if (c == '"') {
      read_string(pos);
    } else {
      while (pos < text.size() && text[pos] != ',' && text[pos] != '}' && text[pos] != ']' &&
             !std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
      }
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::string_view source) : text_(text), source_(source) {}

  [[noreturn]] void fail(const json::json_pointer& where, const std::string& what) const {
    const std::string p = where.to_string();
    std::ostringstream msg;
    msg << source_;
    if (auto line = locate_line(text_, p)) msg << ':' << *line;
    msg << ": " << (p.empty() ? "/" : p) << ": " << what;
    throw ConfigError(msg.str());
  }

  void only_keys(const json& obj, const json::json_pointer& where, std::initializer_list<const char*> allowed) const {
    if (!obj.is_object()) fail(where, "expected an object");
    for (const auto& [key, value] : obj.items()) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
        fail(where / key, "unknown key '" + key + "'");
      }
    }
  }

  const json& require(const json& obj, const json::json_pointer& where, const char* key) const {
    if (!obj.contains(key)) fail(where, std::string("missing required key '") + key + "'");
    return obj.at(key);
  }

  double number(const json& v, const json::json_pointer& where) const {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
  }

  std::int64_t integer(const json& v, const json::json_pointer& where) const {
    if (!v.is_number_integer()) fail(where, "expected an integer");
    return v.get<std::int64_t>();
  }

  std::uint64_t unsigned_integer(const json& v, const json::json_pointer& where) const {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    fail(where, "expected a non-negative integer");
  }

  std::string string(const json& v, const json::json_pointer& where) const {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
  }

  std::vector<double> numbers(const json& v, const json::json_pointer& where) const {
    if (!v.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where / i));
    return out;
  }

  std::vector<int> ints(const json& v, const json::json_pointer& where) const {
    if (!v.is_array()) fail(where, "expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto x = integer(v[i], where / i);
      if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) fail(where / i, "integer out of range");
      out.push_back(static_cast<int>(x));
    }
    return out;
  }

  InstanceConfig parse(const json& root) const {
    const json::json_pointer top;
    only_keys(root, top, {"distributions", "statistic", "engine", "mc", "bounds", "output"});
    InstanceConfig cfg;

    const auto dists_ptr = top / "distributions";
    const json& dists = require(root, top, "distributions");
    if (!dists.is_array() || dists.empty()) fail(dists_ptr, "expected a nonempty array of distributions");
    for (std::size_t i = 0; i < dists.size(); ++i) {
      const auto where = dists_ptr / i;
      only_keys(dists[i], where, {"support", "probs"});
      auto support = numbers(require(dists[i], where, "support"), where / "support");
      auto probs = numbers(require(dists[i], where, "probs"), where / "probs");
      try {
        cfg.distributions.emplace_back(std::move(support), std::move(probs));
      } catch (const std::invalid_argument& e) {
        fail(where, "distribution " + std::to_string(i) + ": " + e.what());
      }
    }
    const int n = static_cast<int>(cfg.distributions.size());

    cfg.statistic = parse_statistic(require(root, top, "statistic"), top / "statistic", n);
    try {
      cfg.statistic.validate(ProductSpace(cfg.distributions, kUnboundedOutcomes));
    } catch (const std::invalid_argument& e) {
      fail(top / "statistic" / "params", e.what());
    }

    if (root.contains("engine")) {
      try {
        cfg.engine = parse_engine(string(root["engine"], top / "engine"));
      } catch (const std::invalid_argument& e) {
        fail(top / "engine", e.what());
      }
    }
    if (root.contains("mc")) {
      if (!uses_mc(cfg.engine)) fail(top / "mc", "an mc section is only allowed when the engine uses Monte Carlo");
      cfg.mc = parse_mc(root["mc"], top / "mc", n);
    } else if (uses_mc(cfg.engine)) {
      fail(top, std::string("engine '") + to_string(cfg.engine) + "' requires an mc section");
    }

    if (root.contains("bounds")) {
      const auto where = top / "bounds";
      only_keys(root["bounds"], where, {"p_values"});
      if (root["bounds"].contains("p_values")) {
        const json& pv = root["bounds"]["p_values"];
        if (pv.is_string()) {
          if (pv.get<std::string>() != "all") fail(where / "p_values", "expected \"all\" or a list of integers");
        } else {
          cfg.p_values = ints(pv, where / "p_values");
          for (std::size_t i = 0; i < cfg.p_values.size(); ++i) {
            if (cfg.p_values[i] < 1 || 2 * cfg.p_values[i] > n) {
              fail(where / "p_values" / i, "p must lie in [1, " + std::to_string(n / 2) + "]");
            }
          }
        }
      }
    }

    if (root.contains("output")) {
      const auto where = top / "output";
      only_keys(root["output"], where, {"format", "path"});
      if (root["output"].contains("format")) {
        const auto f = string(root["output"]["format"], where / "format");
        if (f == "json") cfg.format = OutputFormat::json;
        else if (f == "csv") cfg.format = OutputFormat::csv;
        else if (f == "both") cfg.format = OutputFormat::both;
        else fail(where / "format", "format must be json, csv or both");
      }
      if (root["output"].contains("path")) cfg.output_path = string(root["output"]["path"], where / "path");
    }
    return cfg;
  }

 private:
  Statistic parse_statistic(const json& s, const json::json_pointer& where, int n) const {
    only_keys(s, where, {"kind", "params"});
    const std::string kind = string(require(s, where, "kind"), where / "kind");
    const json params = s.contains("params") ? s["params"] : json::object();
    const auto pw = where / "params";
    if (!params.is_object()) fail(pw, "expected an object");
    try {
      if (kind == "table") {
        only_keys(params, pw, {"values"});
        return Statistic::table(numbers(require(params, pw, "values"), pw / "values"));
      }
      if (kind == "sum") {
        only_keys(params, pw, {"weights"});
        auto w = numbers(require(params, pw, "weights"), pw / "weights");
        if (static_cast<int>(w.size()) != n) {
          fail(pw / "weights", "expected " + std::to_string(n) + " weights, got " + std::to_string(w.size()));
        }
        return Statistic::sum(std::move(w));
      }
      if (kind == "max") {
        only_keys(params, pw, {});
        return Statistic::max();
      }
      if (kind == "ustat2") {
        only_keys(params, pw, {"g"});
        std::vector<std::pair<double, double>> g;
        if (params.contains("g")) {
          const json& gm = params["g"];
          if (!gm.is_array()) fail(pw / "g", "expected an array of [value, mapped] pairs");
          for (std::size_t i = 0; i < gm.size(); ++i) {
            const auto pair = numbers(gm[i], pw / "g" / i);
            if (pair.size() != 2) fail(pw / "g" / i, "expected a [value, mapped] pair");
            g.emplace_back(pair[0], pair[1]);
          }
        }
        return Statistic::ustat2(std::move(g));
      }
      if (kind == "poly") {
        only_keys(params, pw, {"terms"});
        const json& terms = require(params, pw, "terms");
        if (!terms.is_array()) fail(pw / "terms", "expected an array of terms");
        std::vector<Monomial> out;
        for (std::size_t t = 0; t < terms.size(); ++t) {
          const auto tw = pw / "terms" / t;
          only_keys(terms[t], tw, {"coef", "exponents"});
          Monomial m;
          m.coefficient = number(require(terms[t], tw, "coef"), tw / "coef");
          if (terms[t].contains("exponents")) m.exponents = ints(terms[t]["exponents"], tw / "exponents");
          out.push_back(std::move(m));
        }
        return Statistic::poly(std::move(out));
      }
    } catch (const std::invalid_argument& e) {
      fail(pw, e.what());
    }
    fail(where / "kind", "unknown statistic kind '" + kind + "' (expected table, sum, max, ustat2 or poly)");
  }

  McConfig parse_mc(const json& m, const json::json_pointer& where, int n) const {
    only_keys(m, where, {"seed", "outer_samples", "inner_pairs", "ks", "subset_mode", "threads"});
    McConfig c;
    if (m.contains("seed")) c.seed = unsigned_integer(m["seed"], where / "seed");
    if (m.contains("outer_samples")) c.outer_samples = unsigned_integer(m["outer_samples"], where / "outer_samples");
    if (m.contains("inner_pairs")) c.inner_pairs = unsigned_integer(m["inner_pairs"], where / "inner_pairs");
    if (m.contains("threads")) c.threads = static_cast<unsigned>(unsigned_integer(m["threads"], where / "threads"));
    if (m.contains("ks")) {
      c.ks = ints(m["ks"], where / "ks");
      for (std::size_t i = 0; i < c.ks.size(); ++i) {
        if (c.ks[i] < 1 || c.ks[i] > n) fail(where / "ks" / i, "k must lie in [1, " + std::to_string(n) + "]");
      }
    }
    if (m.contains("subset_mode")) {
      const auto s = string(m["subset_mode"], where / "subset_mode");
      if (s == "auto") c.subset_mode = SubsetMode::automatic;
      else if (s == "enumerate") c.subset_mode = SubsetMode::enumerate;
      else if (s == "sample") c.subset_mode = SubsetMode::sample;
      else fail(where / "subset_mode", "subset_mode must be auto, enumerate or sample");
    }
    if (c.outer_samples < 2) fail(where / "outer_samples", "outer_samples must be at least 2");
    if (c.inner_pairs < 1) fail(where / "inner_pairs", "inner_pairs must be at least 1");
    return c;
  }

  std::string_view text_;
  std::string source_;
};

}  // namespace

InstanceConfig parse_config(std::string_view text, std::string_view source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports "line L, column C" in its message.
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return Parser(text, source).parse(root);
}

InstanceConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

json to_json(const InstanceConfig& config) {
  json j;
  j["distributions"] = json::array();
  for (const auto& d : config.distributions) {
    j["distributions"].push_back({{"support", std::vector<double>(d.support().begin(), d.support().end())},
                                  {"probs", std::vector<double>(d.probs().begin(), d.probs().end())}});
  }
  const Statistic& s = config.statistic;
  json params = json::object();
  switch (s.kind()) {
    case StatisticKind::table:
      params["values"] = std::vector<double>(s.table_values().begin(), s.table_values().end());
      break;
    case StatisticKind::sum:
      params["weights"] = std::vector<double>(s.weights().begin(), s.weights().end());
      break;
    case StatisticKind::max:
      break;
    case StatisticKind::ustat2:
      if (!s.value_map().empty()) {
        params["g"] = json::array();
        for (const auto& [x, g] : s.value_map()) params["g"].push_back({x, g});
      }
      break;
    case StatisticKind::poly:
      params["terms"] = json::array();
      for (const auto& t : s.terms()) params["terms"].push_back({{"coef", t.coefficient}, {"exponents", t.exponents}});
      break;
  }
  j["statistic"] = {{"kind", to_string(s.kind())}, {"params", params}};
  j["engine"] = to_string(config.engine);
  if (config.mc) {
    const McConfig& m = *config.mc;
    const char* mode = m.subset_mode == SubsetMode::automatic ? "auto"
                       : m.subset_mode == SubsetMode::enumerate ? "enumerate"
                                                                : "sample";
    j["mc"] = {{"seed", m.seed},       {"outer_samples", m.outer_samples}, {"inner_pairs", m.inner_pairs},
               {"ks", m.ks},           {"subset_mode", mode},              {"threads", m.threads}};
  }
  if (config.p_values.empty()) j["bounds"] = {{"p_values", "all"}};
  else j["bounds"] = {{"p_values", config.p_values}};
  j["output"] = {{"format", to_string(config.format)}};
  if (!config.output_path.empty()) j["output"]["path"] = config.output_path;
  return j;
}

}  // namespace ijack::cli
