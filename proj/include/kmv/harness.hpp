#pragma once

// Checks, suites, radius sweeps, JSON reports and the YAML suite config.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "json.hpp"
#include "kmv/sampler.hpp"

namespace kmv {

using Json = nlohmann::json;

inline constexpr int kReportSchemaVersion = 1;

/// Default working precision, overridable by KMV_PREC_BITS.
inline Bits default_bits() {
  if (const char* env = std::getenv("KMV_PREC_BITS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 64 || v > 65536) {
      throw Error(ErrorCode::config_error, std::string("KMV_PREC_BITS must be an integer in [64, 65536], got '") + env + "'");
    }
    return static_cast<Bits>(v);
  }
  return 256;
}

/// Tightest tolerance a given precision supports.
inline double min_tolerance(Bits bits) { return std::ldexp(1.0, 8 - static_cast<int>(bits)); }

/// Truncation policy for a target tolerance: shells are negligible two
/// orders below it.
inline TruncationPolicy policy_for(double tol, long radius) {
  TruncationPolicy p;
  p.radius = radius;
  p.term_tol = tol * 1e-2;
  return p;
}

// ---- decimal strings -------------------------------------------------------------

inline std::string dec(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double undec(const Json& j) {
  if (!j.is_string()) throw Error(ErrorCode::parse_error, "expected a decimal string, got " + j.dump());
  const std::string s = j.get<std::string>();
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw Error(ErrorCode::parse_error, "not a decimal number: '" + s + "'");
  return v;
}

inline Json to_json(const HValue& v) { return Json::array({v.re().to_string(), v.im().to_string()}); }

inline HValue hvalue_from_json(const Json& j, Bits bits) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_string() || !j[1].is_string()) {
    throw Error(ErrorCode::parse_error, "complex value must be [re, im] decimal strings, got " + j.dump());
  }
  return HValue::parse(j[0].get<std::string>(), j[1].get<std::string>(), bits);
}

// ---- parameter sets ----------------------------------------------------------------

inline Json to_json(const ParamSet& ps) {
  Json j;
  j["precision_bits"] = ps.bits();
  if (ps.has_q()) j["q"] = to_json(ps.q().value());
  Json s = Json::object(), v = Json::object(), i = Json::object(), iv = Json::object();
  for (const auto& [k, x] : ps.scalars()) s[k] = to_json(x);
  for (const auto& [k, xs] : ps.vectors()) {
    Json a = Json::array();
    for (const auto& x : xs) a.push_back(to_json(x));
    v[k] = std::move(a);
  }
  for (const auto& [k, x] : ps.integers()) i[k] = x;
  for (const auto& [k, xs] : ps.int_vectors()) iv[k] = xs;
  j["scalars"] = std::move(s);
  j["vectors"] = std::move(v);
  j["integers"] = std::move(i);
  j["int_vectors"] = std::move(iv);
  return j;
}

inline ParamSet param_set_from_json(const Json& j) {
  try {
    const Bits bits = j.at("precision_bits").get<Bits>();
    ParamSet ps(bits);
    if (j.contains("q")) ps.set_q(hvalue_from_json(j["q"], bits));
    for (const auto& [k, x] : j.at("scalars").items()) ps.set(k, hvalue_from_json(x, bits));
    for (const auto& [k, xs] : j.at("vectors").items()) {
      std::vector<HValue> v;
      for (const auto& x : xs) v.push_back(hvalue_from_json(x, bits));
      ps.set_vec(k, std::move(v));
    }
    for (const auto& [k, x] : j.at("integers").items()) ps.set_int(k, x.get<long>());
    for (const auto& [k, xs] : j.at("int_vectors").items()) ps.set_ints(k, xs.get<std::vector<long>>());
    return ps;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("parameter set: ") + e.what());
  }
}

// ---- check reports ------------------------------------------------------------------

inline Json to_json(const SumDiagnostics& d) {
  return Json{{"terms_evaluated", d.terms_evaluated}, {"nonzero_terms", d.nonzero_terms},
              {"largest_shell_tail", dec(d.largest_shell_tail)}, {"converged", d.converged},
              {"pole_hits", d.pole_hits}, {"shells", d.shells}, {"terminating", d.terminating}};
}

inline SumDiagnostics diagnostics_from_json(const Json& j) {
  SumDiagnostics d;
  d.terms_evaluated = j.at("terms_evaluated").get<long>();
  d.nonzero_terms = j.at("nonzero_terms").get<long>();
  d.largest_shell_tail = undec(j.at("largest_shell_tail"));
  d.converged = j.at("converged").get<bool>();
  d.pole_hits = j.at("pole_hits").get<long>();
  d.shells = j.at("shells").get<long>();
  d.terminating = j.at("terminating").get<bool>();
  return d;
}

struct CheckReport {
  std::string id;
  long sample = 0;
  std::optional<ParamSet> params;
  std::string lhs, rhs;
  double rel_error = std::numeric_limits<double>::infinity();
  double tolerance = 0;
  bool passed = false;
  SumDiagnostics lhs_diag, rhs_diag;
  double wall_time_ms = 0;
  Bits precision_bits = 256;
  std::uint64_t seed = 0;
  /// error code and message when the check could not be evaluated
  std::string error;
};

inline Json to_json(const CheckReport& r) {
  Json j{{"id", r.id},
         {"sample", r.sample},
         {"params", r.params ? to_json(*r.params) : Json(nullptr)},
         {"lhs", r.lhs},
         {"rhs", r.rhs},
         {"rel_error", dec(r.rel_error)},
         {"tolerance", dec(r.tolerance)},
         {"passed", r.passed},
         {"lhs_diag", to_json(r.lhs_diag)},
         {"rhs_diag", to_json(r.rhs_diag)},
         {"wall_time_ms", dec(r.wall_time_ms)},
         {"precision_bits", r.precision_bits},
         {"seed", std::to_string(r.seed)}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

inline CheckReport check_report_from_json(const Json& j) {
  try {
    CheckReport r;
    r.id = j.at("id").get<std::string>();
    r.sample = j.at("sample").get<long>();
    if (!j.at("params").is_null()) r.params = param_set_from_json(j["params"]);
    r.lhs = j.at("lhs").get<std::string>();
    r.rhs = j.at("rhs").get<std::string>();
    r.rel_error = undec(j.at("rel_error"));
    r.tolerance = undec(j.at("tolerance"));
    r.passed = j.at("passed").get<bool>();
    r.lhs_diag = diagnostics_from_json(j.at("lhs_diag"));
    r.rhs_diag = diagnostics_from_json(j.at("rhs_diag"));
    r.wall_time_ms = undec(j.at("wall_time_ms"));
    r.precision_bits = j.at("precision_bits").get<Bits>();
    r.seed = std::stoull(j.at("seed").get<std::string>());
    if (j.contains("error")) r.error = j["error"].get<std::string>();
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("check report: ") + e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::parse_error, std::string("check report: ") + e.what());
  }
}

/// |lhs - rhs| / max(|lhs|, |rhs|), or the absolute difference when both
/// sides are below the working epsilon.
inline double relative_error(const HValue& lhs, const HValue& rhs) {
  HValue d = lhs - rhs;
  if (d.is_zero()) return 0.0;
  const Bits bits = lhs.bits();
  double scale = -std::numeric_limits<double>::infinity();
  if (!lhs.is_zero()) scale = lhs.log2_abs();
  if (!rhs.is_zero()) scale = std::max(scale, rhs.log2_abs());
  if (scale < 1.0 - static_cast<double>(bits)) return std::exp2(d.log2_abs());
  return std::exp2(d.log2_abs() - scale);
}

/// "re + im i" with both parts at full precision.
inline std::string decimal(const HValue& v) {
  std::string im = v.im().to_string();
  if (im.front() == '-') return v.re().to_string() + " - " + im.substr(1) + "i";
  return v.re().to_string() + " + " + im + "i";
}

inline CheckReport check(std::string_view id, const ParamSet& ps, const TruncationPolicy& policy, double tol,
                         std::uint64_t seed = 0) {
  CheckReport r;
  r.id = std::string(id);
  r.params = ps;
  r.tolerance = tol;
  r.precision_bits = ps.bits();
  r.seed = seed;
  auto t0 = std::chrono::steady_clock::now();
  try {
    const auto& d = lookup(id);
    require_admissible(d, ps);
    SideValue l = evaluate_side(d.lhs(ps), policy);
    SideValue rv = evaluate_side(d.rhs(ps), policy);
    r.lhs = decimal(l.value);
    r.rhs = decimal(rv.value);
    r.lhs_diag = l.diag;
    r.rhs_diag = rv.diag;
    r.rel_error = relative_error(l.value, rv.value);
    r.passed = r.rel_error <= tol && l.diag.converged && rv.diag.converged;
  } catch (const Error& e) {
    r.error = e.what();
    r.passed = false;
  }
  r.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// ---- suite configuration -----------------------------------------------------------

struct SuiteConfig {
  /// empty with all_ids = false is an empty suite
  std::vector<std::string> ids;
  bool all_ids = true;
  long samples = 5;
  double tolerance = 1e-18;
  Bits bits = 256;
  TruncationPolicy policy = policy_for(1e-18, 24);
  SampleConfig sampler;
  std::string output;
  /// 0 = one worker per hardware thread
  unsigned threads = 1;

  void validate() const {
    if (samples < 0) throw Error(ErrorCode::config_error, "samples must be >= 0");
    if (!(tolerance >= min_tolerance(bits))) {
      throw Error(ErrorCode::config_error, "tolerance " + dec(tolerance) + " is tighter than " +
                                               std::to_string(bits) + "-bit precision supports (minimum " +
                                               dec(min_tolerance(bits)) + ")");
    }
    policy.validate();
    sampler.validate();
  }

  std::vector<std::string> resolved_ids() const {
    if (!all_ids) {
      for (const auto& id : ids) lookup(id);
      return ids;
    }
    std::vector<std::string> out;
    for (const auto& d : list_identities()) out.push_back(d.id);
    return out;
  }
};

inline SuiteConfig default_suite_config() {
  SuiteConfig c;
  c.bits = default_bits();
  return c;
}

namespace detail {

template <class T>
T yaml_get(const YAML::Node& node, const std::string& field) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw Error(ErrorCode::config_error, "line " + std::to_string(node.Mark().line + 1) + ": field '" + field +
                                             "' has an invalid value '" + YAML::Dump(node) + "'");
  }
}

inline void yaml_field_check(const YAML::Node& map, const std::string& where, std::initializer_list<std::string_view> known) {
  if (!map.IsMap()) {
    throw Error(ErrorCode::config_error, "line " + std::to_string(map.Mark().line + 1) + ": '" + where + "' must be a table");
  }
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorCode::config_error,
                  "line " + std::to_string(kv.first.Mark().line + 1) + ": unknown field '" + where + key + "'");
    }
  }
}

inline void yaml_range(const YAML::Node& node, const std::string& field, DimRange& r) {
  if (!node) return;
  if (node.IsScalar()) {
    r.lo = r.hi = yaml_get<long>(node, field);
    return;
  }
  if (!node.IsSequence() || node.size() != 2) {
    throw Error(ErrorCode::config_error,
                "line " + std::to_string(node.Mark().line + 1) + ": field '" + field + "' must be [lo, hi] or an integer");
  }
  r.lo = yaml_get<long>(node[0], field);
  r.hi = yaml_get<long>(node[1], field);
}

template <class T>
void yaml_opt(const YAML::Node& map, const char* key, const std::string& prefix, T& out) {
  if (auto n = map[key]) out = yaml_get<T>(n, prefix + key);
}

}  // namespace detail

/// Reads a YAML suite config; every field is optional.
inline SuiteConfig parse_suite_config(const std::string& text) {
  using namespace detail;
  SuiteConfig c = default_suite_config();
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw Error(ErrorCode::config_error, "line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  if (!root || root.IsNull()) return c;
  yaml_field_check(root, "", {"identities", "samples", "tolerance", "precision_bits", "seed", "threads", "output",
                              "truncation", "sampler"});
  if (auto ids = root["identities"]) {
    if (ids.IsScalar() && ids.as<std::string>() == "all") {
      c.all_ids = true;
    } else if (ids.IsSequence()) {
      c.all_ids = false;
      c.ids.clear();
      for (const auto& n : ids) c.ids.push_back(yaml_get<std::string>(n, "identities"));
    } else {
      throw Error(ErrorCode::config_error, "line " + std::to_string(ids.Mark().line + 1) +
                                               ": field 'identities' must be \"all\" or a list of ids");
    }
  }
  yaml_opt(root, "samples", "", c.samples);
  yaml_opt(root, "tolerance", "", c.tolerance);
  yaml_opt(root, "precision_bits", "", c.bits);
  yaml_opt(root, "seed", "", c.sampler.seed);
  yaml_opt(root, "threads", "", c.threads);
  yaml_opt(root, "output", "", c.output);
  c.policy = policy_for(c.tolerance, c.policy.radius);
  if (auto t = root["truncation"]) {
    yaml_field_check(t, "truncation.", {"radius", "term_tol", "stagnation_window", "max_terms", "early_stop"});
    yaml_opt(t, "radius", "truncation.", c.policy.radius);
    yaml_opt(t, "term_tol", "truncation.", c.policy.term_tol);
    yaml_opt(t, "stagnation_window", "truncation.", c.policy.stagnation_window);
    yaml_opt(t, "max_terms", "truncation.", c.policy.max_terms);
    yaml_opt(t, "early_stop", "truncation.", c.policy.early_stop);
  }
  c.sampler.radius = c.policy.radius;
  if (auto s = root["sampler"]) {
    const std::string pre = "sampler.";
    yaml_field_check(s, pre, {"q_range", "magnitude_band", "margin", "target_band", "pole_clearance", "phase_exclusion",
                              "radius", "max_attempts", "terminating", "n", "p", "r", "m", "N", "L"});
    auto pair = [&](const char* key, double& lo, double& hi) {
      if (auto n = s[key]) {
        if (!n.IsSequence() || n.size() != 2) {
          throw Error(ErrorCode::config_error,
                      "line " + std::to_string(n.Mark().line + 1) + ": field '" + pre + key + "' must be [lo, hi]");
        }
        lo = yaml_get<double>(n[0], pre + key);
        hi = yaml_get<double>(n[1], pre + key);
      }
    };
    pair("q_range", c.sampler.q_lo, c.sampler.q_hi);
    pair("magnitude_band", c.sampler.mag_lo, c.sampler.mag_hi);
    pair("target_band", c.sampler.target_lo, c.sampler.target_hi);
    yaml_opt(s, "margin", pre, c.sampler.margin);
    yaml_opt(s, "pole_clearance", pre, c.sampler.pole_clearance);
    yaml_opt(s, "phase_exclusion", pre, c.sampler.phase_exclusion);
    yaml_opt(s, "radius", pre, c.sampler.radius);
    yaml_opt(s, "max_attempts", pre, c.sampler.max_attempts);
    yaml_opt(s, "terminating", pre, c.sampler.terminating);
    yaml_range(s["n"], pre + "n", c.sampler.n);
    yaml_range(s["p"], pre + "p", c.sampler.p);
    yaml_range(s["r"], pre + "r", c.sampler.r);
    yaml_range(s["m"], pre + "m", c.sampler.m);
    yaml_range(s["N"], pre + "N", c.sampler.N);
    yaml_range(s["L"], pre + "L", c.sampler.L);
  }
  c.validate();
  return c;
}

inline SuiteConfig load_suite_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config_error, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_suite_config(ss.str());
}

inline Json to_json(const SuiteConfig& c) {
  const auto& s = c.sampler;
  auto range = [](const DimRange& r) { return Json::array({r.lo, r.hi}); };
  Json ids = c.all_ids ? Json("all") : Json(c.ids);
  return Json{{"identities", ids},
              {"samples", c.samples},
              {"tolerance", dec(c.tolerance)},
              {"precision_bits", c.bits},
              {"seed", std::to_string(s.seed)},
              {"truncation",
               {{"radius", c.policy.radius},
                {"term_tol", dec(c.policy.term_tol)},
                {"stagnation_window", c.policy.stagnation_window},
                {"max_terms", c.policy.max_terms},
                {"early_stop", c.policy.early_stop}}},
              {"sampler",
               {{"q_range", {dec(s.q_lo), dec(s.q_hi)}},
                {"magnitude_band", {dec(s.mag_lo), dec(s.mag_hi)}},
                {"margin", dec(s.margin)},
                {"target_band", {dec(s.target_lo), dec(s.target_hi)}},
                {"pole_clearance", dec(s.pole_clearance)},
                {"phase_exclusion", dec(s.phase_exclusion)},
                {"radius", s.radius},
                {"max_attempts", s.max_attempts},
                {"terminating", s.terminating},
                {"n", range(s.n)},
                {"p", range(s.p)},
                {"r", range(s.r)},
                {"m", range(s.m)},
                {"N", range(s.N)},
                {"L", range(s.L)}}}};
}

// ---- suites -------------------------------------------------------------------------

struct GroupSummary {
  std::string id;
  long checks = 0;
  long passed = 0;
  double worst_rel_error = 0;
  double wall_time_ms = 0;
};

struct SuiteResult {
  Json config;
  std::vector<CheckReport> reports;
  std::vector<GroupSummary> groups;
  double wall_time_ms = 0;

  bool all_passed() const {
    return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; });
  }
  long failed() const {
    return static_cast<long>(std::count_if(reports.begin(), reports.end(), [](const CheckReport& r) { return !r.passed; }));
  }
};

inline std::vector<GroupSummary> summarize(const std::vector<CheckReport>& reports) {
  std::vector<GroupSummary> out;
  for (const auto& r : reports) {
    if (out.empty() || out.back().id != r.id) out.push_back(GroupSummary{r.id});
    auto& g = out.back();
    ++g.checks;
    g.passed += r.passed ? 1 : 0;
    g.worst_rel_error = std::max(g.worst_rel_error, r.rel_error);
    g.wall_time_ms += r.wall_time_ms;
  }
  return out;
}

/// Runs jobs 0..count-1 on up to `threads` workers; job(i) writes slot i.
template <class F>
void parallel_for(size_t count, unsigned threads, F job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<size_t>(threads, count));
  if (threads <= 1) {
    for (size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < count; i = next++) job(i);
    });
  }
}

inline SuiteResult run_suite(const SuiteConfig& cfg) {
  cfg.validate();
  auto t0 = std::chrono::steady_clock::now();
  SuiteResult res;
  res.config = to_json(cfg);

  struct Job {
    std::string id;
    long sample;
    std::optional<ParamSet> ps;
    std::string error;
  };
  std::vector<Job> jobs;
  for (const auto& id : cfg.resolved_ids()) {
    try {
      auto sets = sample(id, cfg.sampler, static_cast<size_t>(cfg.samples), cfg.bits);
      for (size_t i = 0; i < sets.size(); ++i) jobs.push_back(Job{id, static_cast<long>(i), std::move(sets[i]), {}});
    } catch (const Error& e) {
      jobs.push_back(Job{id, 0, std::nullopt, e.what()});
    }
  }

  res.reports.resize(jobs.size());
  parallel_for(jobs.size(), cfg.threads, [&](size_t i) {
    const Job& j = jobs[i];
    if (j.ps) {
      res.reports[i] = check(j.id, *j.ps, cfg.policy, cfg.tolerance, cfg.sampler.seed);
    } else {
      CheckReport r;
      r.id = j.id;
      r.tolerance = cfg.tolerance;
      r.precision_bits = cfg.bits;
      r.seed = cfg.sampler.seed;
      r.error = j.error;
      res.reports[i] = std::move(r);
    }
    res.reports[i].sample = j.sample;
  });
  res.groups = summarize(res.reports);
  res.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

inline Json to_json(const SuiteResult& s) {
  Json reports = Json::array(), groups = Json::array();
  for (const auto& r : s.reports) reports.push_back(to_json(r));
  for (const auto& g : s.groups) {
    groups.push_back(Json{{"id", g.id},
                          {"checks", g.checks},
                          {"passed", g.passed},
                          {"worst_rel_error", dec(g.worst_rel_error)},
                          {"wall_time_ms", dec(g.wall_time_ms)}});
  }
  return Json{{"schema_version", kReportSchemaVersion},
              {"config", s.config},
              {"reports", std::move(reports)},
              {"summary",
               {{"groups", std::move(groups)},
                {"checks", static_cast<long>(s.reports.size())},
                {"failed", s.failed()},
                {"all_passed", s.all_passed()},
                {"wall_time_ms", dec(s.wall_time_ms)}}}};
}

inline SuiteResult suite_result_from_json(const Json& j) {
  try {
    if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw Error(ErrorCode::parse_error, "unsupported report schema_version " + j["schema_version"].dump());
    }
    SuiteResult s;
    s.config = j.at("config");
    for (const auto& r : j.at("reports")) s.reports.push_back(check_report_from_json(r));
    for (const auto& g : j.at("summary").at("groups")) {
      s.groups.push_back(GroupSummary{g.at("id").get<std::string>(), g.at("checks").get<long>(),
                                      g.at("passed").get<long>(), undec(g.at("worst_rel_error")),
                                      undec(g.at("wall_time_ms"))});
    }
    s.wall_time_ms = undec(j.at("summary").at("wall_time_ms"));
    return s;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("suite report: ") + e.what());
  }
}

/// Canonical text of a report document.
inline std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

/// Copy of a report document with every wall_time_ms field removed.
inline Json without_timing(Json j) {
  if (j.is_object()) {
    j.erase("wall_time_ms");
    for (auto& [k, v] : j.items()) v = without_timing(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = without_timing(v);
  }
  return j;
}

inline void write_report(const Json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::config_error, "cannot write report '" + path + "'");
  out << dump_report(j);
}

// ---- radius sweeps ------------------------------------------------------------------

struct SweepRow {
  long radius = 0;
  HValue lhs{256};
  double abs_error = 0;
  double rel_error = 0;
  double shell_tail = 0;
  bool converged = false;
  std::string error;
};

/// LHS truncated at each radius against the RHS at the largest radius.
inline std::vector<SweepRow> radius_sweep(std::string_view id, const ParamSet& ps, std::vector<long> radii,
                                          double term_tol = 1e-30) {
  const auto& d = lookup(id);
  require_admissible(d, ps);
  if (d.finite) throw Error(ErrorCode::invalid_argument, d.id + " has no infinite side to sweep");
  if (radii.empty()) return {};
  TruncationPolicy pol;
  pol.term_tol = term_tol;
  pol.early_stop = false;
  pol.radius = *std::max_element(radii.begin(), radii.end());
  const HValue rhs = evaluate_side(d.rhs(ps), pol).value;
  const Side lhs = d.lhs(ps);
  std::vector<SweepRow> rows;
  for (long R : radii) {
    pol.radius = R;
    SweepRow row;
    row.radius = R;
    row.lhs = HValue(ps.bits());
    try {
      SideValue l = evaluate_side(lhs, pol);
      row.lhs = l.value;
      row.abs_error = std::exp2((l.value - rhs).is_zero() ? -INFINITY : (l.value - rhs).log2_abs());
      row.rel_error = relative_error(l.value, rhs);
      row.shell_tail = l.diag.largest_shell_tail;
      row.converged = l.diag.converged;
    } catch (const Error& e) {
      row.abs_error = row.rel_error = row.shell_tail = NAN;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const std::vector<SweepRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    a.push_back(Json{{"radius", r.radius},
                     {"lhs", decimal(r.lhs)},
                     {"abs_error", dec(r.abs_error)},
                     {"rel_error", dec(r.rel_error)},
                     {"shell_tail", dec(r.shell_tail)},
                     {"converged", r.converged}});
    if (!r.error.empty()) a.back()["error"] = r.error;
  }
  return a;
}

}  // namespace kmv
