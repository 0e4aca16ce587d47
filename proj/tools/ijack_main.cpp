#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "ijack/cli/run.hpp"
#include "ijack/cli/selfcheck.hpp"
#include "ijack/version.hpp"

int main(int argc, char** argv) {
  using namespace ijack::cli;

  CLI::App app{"Exact and Monte Carlo jackknife variance brackets"};
  app.set_version_flag("--version", std::string("ijack ") + ijack::kVersion);
  app.require_subcommand(1);

  RunOptions run_opts;
  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Evaluate one instance described by a JSON config");
  run_cmd->add_option("config", config_path, "Instance config (JSON)")->required();
  run_cmd->add_option("--engine", run_opts.engine, "Override the config's engine")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Engine>{{"exact", Engine::exact}, {"mc", Engine::mc}, {"both", Engine::both}}));
  run_cmd->add_option("--seed", run_opts.seed, "Override the Monte Carlo seed");
  run_cmd->add_option("--out", run_opts.out, "Output path (overrides the config)");
  run_cmd->add_option("--threads", run_opts.threads, "Monte Carlo worker threads")->check(CLI::PositiveNumber);

  SelfcheckOptions check_opts;
  auto* check_cmd = app.add_subcommand("selfcheck", "Randomized identity and inequality battery");
  check_cmd->add_option("--instances", check_opts.instances, "Number of random instances")->capture_default_str();
  check_cmd->add_option("--seed", check_opts.seed, "Instance generator seed")->capture_default_str();
  check_cmd->add_option("--failure-out", check_opts.failure_path, "Where to write the first failing instance")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (*run_cmd) {
    run_opts.config = config_path;
    return run(run_opts, std::cout, std::cerr);
  }
  return selfcheck(check_opts, std::cout, std::cerr);
}
