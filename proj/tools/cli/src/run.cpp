#include "ijack/cli/run.hpp"

#include <fstream>
#include <ostream>

#include "ijack/conditional.hpp"
#include "ijack/version.hpp"

namespace ijack::cli {

namespace {

std::vector<int> selected_p(const InstanceConfig& config, int n) {
  if (!config.p_values.empty()) return config.p_values;
  std::vector<int> all;
  for (int p = 1; 2 * p <= n; ++p) all.push_back(p);
  return all;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

}  // namespace

Report run_instance(const InstanceConfig& config, std::optional<Engine> engine_override,
                    std::optional<std::uint64_t> seed_override, std::optional<unsigned> threads) {
  const auto start = std::chrono::steady_clock::now();
  const Engine engine = engine_override.value_or(config.engine);
  const int n = static_cast<int>(config.distributions.size());
  const std::vector<int> ps = selected_p(config, n);

  Report r;
  r.version = kVersion;
  r.engine = to_string(engine);
  r.n = n;
  r.statistic = to_string(config.statistic.kind());

  if (uses_exact(engine)) {
    const SpacePtr space = build_space(config.distributions);
    r.outcomes = space->outcome_count();
    const CondExpCache cache(tabulate(config.statistic, space));
    BoundsReport b = build_bounds_report(cache);
    if (!config.p_values.empty()) {
      std::vector<Bracket> kept;
      for (int p : ps) kept.push_back(b.brackets[static_cast<std::size_t>(p - 1)]);
      b.brackets = std::move(kept);
    }
    r.exact = std::move(b);
  }

  if (uses_mc(engine)) {
    McConfig mc = config.mc.value_or(McConfig{});
    if (seed_override) mc.seed = *seed_override;
    if (threads) mc.threads = *threads;
    if (mc.ks.empty()) {
      for (int k = 1; k <= n; ++k) mc.ks.push_back(k);
    }
    const ProductSpace space(config.distributions, kUnboundedOutcomes);
    if (!uses_exact(engine)) r.outcomes = space.enumerable() ? space.outcome_count() : 0;
    McSection s;
    s.seed = mc.seed;
    s.outer_samples = mc.outer_samples;
    s.inner_pairs = mc.inner_pairs;
    s.ks = mc.ks;
    for (int k : mc.ks) {
      s.EJ.push_back(estimate_EJ(space, config.statistic, k, mc));
      s.EK.push_back(estimate_EK(space, config.statistic, k, mc));
    }
    s.var = estimate_variance(space, config.statistic, mc);
    for (int p : ps) s.brackets.push_back(estimate_bracket(space, config.statistic, p, mc));
    r.seed = mc.seed;
    r.mc = std::move(s);
  }

  r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  InstanceConfig config;
  try {
    config = load_config(options.config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  Report report;
  try {
    report = run_instance(config, options.engine, options.seed, options.threads);
  } catch (const std::exception& e) {
    err << "error: " << options.config.string() << ": " << e.what() << '\n';
    return 1;
  }

  const std::filesystem::path path = options.out ? *options.out : std::filesystem::path(config.output_path);
  const std::string json_text = to_json(report).dump(2) + "\n";
  const std::string csv_text = bracket_csv(report);
  try {
    if (config.format != OutputFormat::csv) {
      if (path.empty()) out << json_text;
      else write_file(path, json_text);
    }
    if (config.format != OutputFormat::json) {
      if (path.empty()) {
        out << csv_text;
      } else {
        std::filesystem::path csv_path = path;
        if (config.format == OutputFormat::both) csv_path.replace_extension(".csv");
        write_file(csv_path, csv_text);
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ijack::cli
