#include "ijack/cli/report.hpp"

#include <cstdio>
#include <sstream>

namespace ijack::cli {

using nlohmann::json;

namespace {

json estimate_json(const McEstimate& e) {
  return {{"mean", e.mean}, {"std_error", e.std_error}, {"samples", e.samples}, {"negative", e.negative}};
}

McEstimate estimate_from(const json& j) {
  return {j.at("mean").get<double>(), j.at("std_error").get<double>(), j.at("samples").get<std::size_t>(),
          j.at("negative").get<bool>()};
}

json residuals_json(const Residuals& r) {
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back({{"name", e.name}, {"value", e.value}});
  return {{"tolerance", r.tolerance}, {"max", r.max()}, {"ok", r.ok()}, {"entries", entries}};
}

Residuals residuals_from(const json& j) {
  Residuals r;
  r.tolerance = j.at("tolerance").get<double>();
  for (const auto& e : j.at("entries")) r.entries.push_back({e.at("name").get<std::string>(), e.at("value").get<double>()});
  return r;
}

json exact_json(const BoundsReport& b) {
  json brackets = json::array();
  for (const auto& br : b.brackets) {
    brackets.push_back({{"p", br.p},
                        {"lower_J", br.lower_J},
                        {"lower_JK", br.lower_JK},
                        {"var", b.var_exact},
                        {"upper_JK", br.upper_JK},
                        {"upper_J", br.upper_J}});
  }
  json j = {
      {"n", b.n},
      {"mean", b.mean},
      {"var_exact", b.var_exact},
      {"scale", b.scale},
      {"EJ", b.EJ_clamped},
      {"EK", b.EK_clamped},
      {"ER", b.ER_clamped},
      {"spectrum", b.spectrum_clamped},
      {"raw", {{"EJ", b.EJ}, {"EK", b.EK}, {"ER", b.ER}, {"spectrum", b.spectrum}}},
      {"brackets", brackets},
      {"p0_chain",
       {{"EK1", b.p0.EK1},
        {"var", b.p0.var},
        {"EJ1", b.p0.EJ1},
        {"half_EK2", b.p0.half_EK2},
        {"bias", b.p0.bias},
        {"half_EJ2", b.p0.half_EJ2}}},
      {"residuals",
       {{"identities", residuals_json(b.identities)},
        {"lemma", residuals_json(b.lemma)},
        {"recursion", residuals_json(b.recursion)}}},
      {"inequalities_hold", b.inequalities_hold()},
      {"corollary", nullptr},
  };
  if (b.corollary) {
    j["corollary"] = {{"d", b.corollary->degree}, {"lower", b.corollary->lower}, {"upper", b.corollary->upper}};
  }
  return j;
}

BoundsReport exact_from(const json& j) {
  BoundsReport b;
  b.n = j.at("n").get<int>();
  b.mean = j.at("mean").get<double>();
  b.var_exact = j.at("var_exact").get<double>();
  b.scale = j.at("scale").get<double>();
  b.EJ_clamped = j.at("EJ").get<std::vector<double>>();
  b.EK_clamped = j.at("EK").get<std::vector<double>>();
  b.ER_clamped = j.at("ER").get<std::vector<double>>();
  b.spectrum_clamped = j.at("spectrum").get<std::vector<double>>();
  const json& raw = j.at("raw");
  b.EJ = raw.at("EJ").get<std::vector<double>>();
  b.EK = raw.at("EK").get<std::vector<double>>();
  b.ER = raw.at("ER").get<std::vector<double>>();
  b.spectrum = raw.at("spectrum").get<std::vector<double>>();
  for (const auto& br : j.at("brackets")) {
    b.brackets.push_back({br.at("p").get<int>(), br.at("lower_J").get<double>(), br.at("lower_JK").get<double>(),
                          br.at("upper_JK").get<double>(), br.at("upper_J").get<double>()});
  }
  const json& p0 = j.at("p0_chain");
  b.p0 = {p0.at("EK1").get<double>(),  p0.at("var").get<double>(),  p0.at("EJ1").get<double>(),
          p0.at("half_EK2").get<double>(), p0.at("bias").get<double>(), p0.at("half_EJ2").get<double>()};
  const json& res = j.at("residuals");
  b.identities = residuals_from(res.at("identities"));
  b.lemma = residuals_from(res.at("lemma"));
  b.recursion = residuals_from(res.at("recursion"));
  if (!j.at("corollary").is_null()) {
    const json& c = j.at("corollary");
    b.corollary = DegreeBound{c.at("d").get<int>(), c.at("lower").get<double>(), c.at("upper").get<double>()};
  }
  return b;
}

json mc_json(const McSection& m) {
  json ej = json::array();
  json ek = json::array();
  for (std::size_t i = 0; i < m.ks.size(); ++i) {
    json a = estimate_json(m.EJ[i]);
    json b = estimate_json(m.EK[i]);
    a["k"] = m.ks[i];
    b["k"] = m.ks[i];
    ej.push_back(std::move(a));
    ek.push_back(std::move(b));
  }
  json brackets = json::array();
  for (const auto& b : m.brackets) {
    brackets.push_back({{"p", b.p},
                        {"lower_J", estimate_json(b.lower_J)},
                        {"lower_JK", estimate_json(b.lower_JK)},
                        {"upper_JK", estimate_json(b.upper_JK)},
                        {"upper_J", estimate_json(b.upper_J)}});
  }
  return {{"seed", m.seed},
          {"outer_samples", m.outer_samples},
          {"inner_pairs", m.inner_pairs},
          {"ks", m.ks},
          {"EJ", ej},
          {"EK", ek},
          {"var", estimate_json(m.var)},
          {"brackets", brackets}};
}

McSection mc_from(const json& j) {
  McSection m;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.outer_samples = j.at("outer_samples").get<std::size_t>();
  m.inner_pairs = j.at("inner_pairs").get<std::size_t>();
  m.ks = j.at("ks").get<std::vector<int>>();
  for (const auto& e : j.at("EJ")) m.EJ.push_back(estimate_from(e));
  for (const auto& e : j.at("EK")) m.EK.push_back(estimate_from(e));
  m.var = estimate_from(j.at("var"));
  for (const auto& b : j.at("brackets")) {
    m.brackets.push_back({b.at("p").get<int>(), estimate_from(b.at("lower_J")), estimate_from(b.at("lower_JK")),
                          estimate_from(b.at("upper_JK")), estimate_from(b.at("upper_J"))});
  }
  return m;
}

bool same(const McEstimate& a, const McEstimate& b) { return a == b; }

}  // namespace

json to_json(const Report& r) {
  json j = {{"version", r.version},       {"engine", r.engine}, {"seed", nullptr},
            {"wall_time_s", r.wall_time_s}, {"n", r.n},           {"outcomes", r.outcomes},
            {"statistic", r.statistic},   {"exact", nullptr},   {"mc", nullptr}};
  if (r.seed) j["seed"] = *r.seed;
  if (r.exact) j["exact"] = exact_json(*r.exact);
  if (r.mc) j["mc"] = mc_json(*r.mc);
  return j;
}

Report report_from_json(const json& j) {
  Report r;
  r.version = j.at("version").get<std::string>();
  r.engine = j.at("engine").get<std::string>();
  if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
  r.wall_time_s = j.at("wall_time_s").get<double>();
  r.n = j.at("n").get<int>();
  r.outcomes = j.at("outcomes").get<std::uint64_t>();
  r.statistic = j.at("statistic").get<std::string>();
  if (!j.at("exact").is_null()) r.exact = exact_from(j.at("exact"));
  if (!j.at("mc").is_null()) r.mc = mc_from(j.at("mc"));
  return r;
}

std::string bracket_csv(const Report& report) {
  std::ostringstream out;
  out << "p,lower_J,lower_JK,var,upper_JK,upper_J\n";
  char buf[512];
  auto row = [&](int p, double a, double b, double v, double c, double d) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g\n", p, a, b, v, c, d);
    out << buf;
  };
  if (report.exact) {
    for (const auto& b : report.exact->brackets) row(b.p, b.lower_J, b.lower_JK, report.exact->var_exact, b.upper_JK, b.upper_J);
  } else if (report.mc) {
    for (const auto& b : report.mc->brackets) {
      row(b.p, b.lower_J.mean, b.lower_JK.mean, report.mc->var.mean, b.upper_JK.mean, b.upper_J.mean);
    }
  }
  return out.str();
}

bool operator==(const McSection& a, const McSection& b) {
  if (a.seed != b.seed || a.outer_samples != b.outer_samples || a.inner_pairs != b.inner_pairs || a.ks != b.ks ||
      a.EJ != b.EJ || a.EK != b.EK || !same(a.var, b.var) || a.brackets.size() != b.brackets.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.brackets.size(); ++i) {
    const auto& x = a.brackets[i];
    const auto& y = b.brackets[i];
    if (x.p != y.p || !same(x.lower_J, y.lower_J) || !same(x.lower_JK, y.lower_JK) || !same(x.upper_JK, y.upper_JK) ||
        !same(x.upper_J, y.upper_J)) {
      return false;
    }
  }
  return true;
}

bool operator==(const Report& a, const Report& b) {
  return a.version == b.version && a.engine == b.engine && a.seed == b.seed && a.wall_time_s == b.wall_time_s &&
         a.n == b.n && a.outcomes == b.outcomes && a.statistic == b.statistic && a.exact == b.exact && a.mc == b.mc;
}

}  // namespace ijack::cli
