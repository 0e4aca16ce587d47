// One PASS/FAIL line per acceptance criterion; the exit status is the number
// of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "fixtures.hpp"
#include "ijack/cli/run.hpp"
#include "ijack/cli/selfcheck.hpp"
#include "symmetric.hpp"

using namespace ijack;
using namespace ijack::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Shared by criteria 1-3: the randomized battery over 200 instances.
struct Battery {
  std::vector<cli::CheckSummary> checks;
  std::size_t instances = 0;
  std::size_t aborted = 0;
  double seconds = 0.0;
};

Battery run_battery() {
  Battery b;
  const cli::InstanceSpec spec{1, 5, 2, 4, 0.05, 0.0, 0.0};
  const auto t0 = Clock::now();
  for (std::size_t i = 0; i < 200; ++i) {
    const std::string detail = cli::check_instance(cli::random_instance(2024, i, spec), b.checks);
    if (detail.rfind("internal consistency", 0) == 0) ++b.aborted;
    ++b.instances;
  }
  b.seconds = seconds_since(t0);
  return b;
}

Outcome judge(const Battery& b, const std::function<bool(const std::string&)>& wanted, std::size_t expected_groups) {
  Outcome o;
  double worst = 0.0;
  std::size_t groups = 0;
  std::string failing;
  for (const auto& c : b.checks) {
    if (!wanted(c.name)) continue;
    ++groups;
    worst = std::max(worst, c.max_residual / c.tolerance);
    if (c.failures) failing += " " + c.name;
  }
  o.pass = failing.empty() && groups >= expected_groups && b.aborted == 0;
  o.detail = std::to_string(b.instances) + " instances, " + std::to_string(groups) + " checks, worst residual " +
             fmt("%.2e", worst) + " of tolerance";
  if (!failing.empty()) o.detail += ", failing:" + failing;
  if (b.aborted) o.detail += ", " + std::to_string(b.aborted) + " instances raised a consistency error";
  return o;
}

bool starts_with(const std::string& s, const char* prefix) { return s.rfind(prefix, 0) == 0; }

Outcome criterion1(const Battery& b) {
  const std::set<std::string> names = {"varexp", "varexautre", "varexK", "two-index decomposition",
                                       "iterated differences", "hoeffding reconstruction", "hoeffding degeneracy",
                                       "hoeffding orthogonality"};
  Outcome o = judge(b, [&](const std::string& n) { return names.count(n) || starts_with(n, "spectrum:") || starts_with(n, "recursion:"); },
                    names.size() + 3 + 3);
  o.detail += fmt(", %.1f s", b.seconds);
  if (b.seconds >= 60.0) o.pass = false;
  return o;
}

Outcome criterion2(const Battery& b) {
  return judge(b, [](const std::string& n) { return n == "bracket ordering" || n == "p=0 chains"; }, 2);
}

Outcome criterion3(const Battery& b) {
  return judge(b, [](const std::string& n) {
    return n == "recursion vs inclusion-exclusion" || n == "E Var^(I) = sum_{J>=I} E h_J^2";
  }, 2);
}

Outcome criterion4() {
  struct Case {
    const char* name;
    Fixture (*make)();
    double var;
    std::vector<double> EJ, EK, spectrum;
  } cases[] = {
      {"RAD2-PROD", rad2_prod, 1, {2, 2}, {0, 2}, {0, 1}},
      {"RAD2-SUM", rad2_sum, 2, {2, 0}, {2, 0}, {2, 0}},
      {"RAD3-U2", rad3_u2, 3, {6, 6, 0}, {0, 6, 0}, {0, 3, 0}},
  };
  Outcome o;
  double worst = 0.0;
  auto compare = [&](const char* name, const char* what, double got, double want) {
    const double err = std::abs(got - want);
    worst = std::max(worst, err);
    if (err > 1e-12) {
      o.pass = false;
      o.detail += std::string(" ") + name + " " + what + fmt("=%.17g (want %.17g)", got, want);
    }
  };
  for (const auto& c : cases) {
    const Fixture f = c.make();
    const CondExpCache cache(f.table);
    const BoundsReport r = build_bounds_report(cache);
    compare(c.name, "Var", r.var_exact, c.var);
    for (std::size_t k = 0; k < c.EJ.size(); ++k) {
      compare(c.name, "EJ", r.EJ[k], c.EJ[k]);
      compare(c.name, "EK", r.EK[k], c.EK[k]);
      compare(c.name, "spectrum", r.spectrum[k], c.spectrum[k]);
    }
    if (std::string(c.name) == "RAD3-U2") {
      if (!r.corollary || r.corollary->degree != 2) {
        o.pass = false;
        o.detail += " RAD3-U2 degree bound";
      } else {
        compare(c.name, "EJ_2/2!", r.corollary->upper, 3.0);
        compare(c.name, "EJ_2/2! - Var", r.corollary->upper - r.var_exact, 0.0);
      }
    }
  }
  o.detail = "RAD2-PROD, RAD2-SUM, RAD3-U2, max abs error " + fmt("%.1e", worst) + o.detail;
  return o;
}

Outcome criterion5() {
  SplitMix64 rng = SplitMix64::stream(5, 0, 0);
  Outcome o;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int n = 3 + static_cast<int>(rng.below(3));
    const Fixture f = random_symmetric(rng, n);
    const CondExpCache cache(f.table);
    for (int k = 1; k <= n; ++k) {
      const double rhs = static_cast<double>(falling_factorial(n, k)) * expected_iterated_variance(cache, IndexSet::prefix(k));
      const double r = std::abs(jackknife_J(cache, k) - rhs) / std::max({1.0, std::abs(rhs), cache.scale()});
      worst = std::max(worst, r);
    }
  }
  o.pass = worst <= 1e-9;
  o.detail = "20 symmetric statistics, n in 3..5, worst relative residual " + fmt("%.2e", worst);
  return o;
}

Outcome criterion6() {
  const auto t0 = Clock::now();
  const Fixture f = rad3_u2();
  const double EJ[] = {6, 6, 0}, EK[] = {0, 6, 0};
  Outcome o;
  std::string parts;
  double worst_z = 0.0, worst_cover = 1.0;
  for (int k = 1; k <= 3; ++k) {
    for (int which = 0; which < 2; ++which) {
      const double exact = which == 0 ? EJ[k - 1] : EK[k - 1];
      double sum = 0.0, var_sum = 0.0;
      int covered = 0;
      const int runs = 200;
      for (int run = 0; run < runs; ++run) {
        McConfig cfg;
        cfg.seed = 1000 + static_cast<std::uint64_t>(run);
        cfg.outer_samples = 1000;
        const McEstimate e = which == 0 ? estimate_EJ(*f.space, f.statistic, k, cfg) : estimate_EK(*f.space, f.statistic, k, cfg);
        sum += e.mean;
        var_sum += e.std_error * e.std_error;
        if (std::abs(e.mean - exact) <= 2.0 * e.std_error + 1e-12) ++covered;
      }
      const double grand = sum / runs;
      const double pooled = std::sqrt(var_sum) / runs;
      const double z = pooled > 0 ? std::abs(grand - exact) / pooled : (std::abs(grand - exact) > 1e-12 ? INFINITY : 0.0);
      const double cover = static_cast<double>(covered) / runs;
      worst_z = std::max(worst_z, z);
      worst_cover = std::min(worst_cover, cover);
      if (z > 4.0 || cover < 0.9) {
        o.pass = false;
        parts += std::string(" ") + (which == 0 ? "EJ_" : "EK_") + std::to_string(k) + fmt("(z=%.2f, cover=%.2f)", z, cover);
      }
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 120.0) o.pass = false;
  o.detail = "RAD3-U2, 200 runs x 1000 samples, worst |z| " + fmt("%.2f", worst_z) + ", lowest 2-sigma coverage " +
             fmt("%.3f", worst_cover) + fmt(", %.1f s", secs) + parts;
  return o;
}

Outcome criterion7() {
  Outcome o;
  SplitMix64 rng = SplitMix64::stream(7, 0, 0);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    std::vector<double> v(2 + rng.below(20));
    const double offset = 20.0 * rng.uniform() - 10.0;
    const double spread = std::ldexp(1.0, static_cast<int>(rng.below(10)) - 5);
    for (double& x : v) x = offset + spread * (rng.uniform() - 0.5);
    double pair = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) pair += (v[i] - v[j]) * (v[i] - v[j]);
    pair /= static_cast<double>(v.size());
    try {
      worst = std::max(worst, std::abs(classical_jackknife(v) - pair) / pair);
    } catch (const ConsistencyError&) {
      worst = INFINITY;
    }
  }
  if (worst > 1e-12) o.pass = false;

  std::vector<Fixture> fixtures = {mean4_rad(), max3_u01(), rad3_u2()};
  SplitMix64 srng = SplitMix64::stream(77, 0, 0);
  while (fixtures.size() < 10) fixtures.push_back(random_symmetric(srng, 3 + static_cast<int>(srng.below(2))));
  double worst_sigma = INFINITY;
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    McConfig cfg;
    cfg.seed = 700 + i;
    cfg.outer_samples = 20000;
    const McEstimate b = mc_efron_stein_bias(*fixtures[i].space, fixtures[i].statistic, cfg);
    const double sigmas = b.std_error > 0 ? b.mean / b.std_error : (b.mean >= 0 ? INFINITY : -INFINITY);
    worst_sigma = std::min(worst_sigma, sigmas);
    if (b.mean + 4.0 * b.std_error < 0.0) o.pass = false;
  }
  o.detail = "1000 vectors, worst relative gap " + fmt("%.2e", worst) + "; 10 symmetric iid fixtures, lowest bias z " +
             fmt("%.2f", worst_sigma);
  return o;
}

Outcome criterion8() {
  Outcome o;
  // The real executable, as a user would run it.
  const std::string report_path = (std::filesystem::temp_directory_path() / "ijack_acceptance_report.json").string();
  const std::string cmd = std::string("\"") + IJACK_CLI_PATH + "\" run \"" + IJACK_FIXTURE_DIR + "/rad2_prod.json\" --out \"" +
                          report_path + "\"";
  const int run_status = std::system(cmd.c_str());
  std::ifstream in(report_path);
  if (run_status != 0 || !in) {
    o.pass = false;
    o.detail = "run exited with " + std::to_string(run_status);
    return o;
  }
  const nlohmann::json j = nlohmann::json::parse(in);
  const auto& ex = j.at("exact");
  auto near = [](const nlohmann::json& arr, std::vector<double> want) {
    if (arr.size() != want.size()) return false;
    for (std::size_t i = 0; i < want.size(); ++i)
      if (std::abs(arr[i].get<double>() - want[i]) > 1e-12) return false;
    return true;
  };
  const bool values = std::abs(ex.at("var_exact").get<double>() - 1.0) <= 1e-12 && near(ex.at("EJ"), {2, 2}) &&
                      near(ex.at("EK"), {0, 2}) && near(ex.at("spectrum"), {0, 1}) && j.contains("version") &&
                      j.contains("wall_time_s") && j.at("engine") == "exact";
  std::filesystem::remove(report_path);

  const std::string failure = (std::filesystem::temp_directory_path() / "ijack_acceptance_failure.json").string();
  const std::string check = std::string("\"") + IJACK_CLI_PATH + "\" selfcheck --instances 200 --failure-out \"" +
                            failure + "\" > /dev/null";
  const int check_status = std::system(check.c_str());
  o.pass = values && check_status == 0;
  o.detail = std::string("report values ") + (values ? "match" : "DIFFER") + ", selfcheck --instances 200 exit " +
             std::to_string(WIFEXITED(check_status) ? WEXITSTATUS(check_status) : -1);
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* title, const Outcome& o) {
    std::printf("[%s] criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  auto guarded = [](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };

  const Battery battery = run_battery();
  report(1, "exact identity suite", guarded([&] { return criterion1(battery); }));
  report(2, "inequality suite", guarded([&] { return criterion2(battery); }));
  report(3, "oracle equivalence", guarded([&] { return criterion3(battery); }));
  report(4, "fixture values", guarded(criterion4));
  report(5, "symmetric collapse", guarded(criterion5));
  report(6, "Monte Carlo calibration", guarded(criterion6));
  report(7, "classical identity and upward bias", guarded(criterion7));
  report(8, "command line", guarded(criterion8));
  std::printf("%d of 8 criteria failed\n", failures);
  return failures;
}
