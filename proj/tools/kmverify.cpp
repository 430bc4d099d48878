// kmverify: command-line front end for the verification harness.
//
// exit status: 0 when every check passed, 1 when any failed, 2 on usage or
// configuration errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "kmv/harness.hpp"

using namespace kmv;

namespace {

struct Options {
  std::string id;
  std::uint64_t seed = 1;
  Bits bits = 0;
  double tol = 0;
  long radius = 0;
  long samples = 0;
  std::string config;
  std::string out;
  std::string params;
  std::vector<long> radii;
  bool terminating = false;
  bool non_terminating = false;
  unsigned threads = 1;
};

/// Config file first, explicit flags on top.
SuiteConfig resolve(const Options& o, CLI::App& app) {
  SuiteConfig c = o.config.empty() ? default_suite_config() : load_suite_config(o.config);
  auto given = [&](const char* flag) {
    const auto* opt = app.get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--seed")) c.sampler.seed = o.seed;
  if (given("--prec-bits")) c.bits = o.bits;
  if (given("--tol")) {
    c.tolerance = o.tol;
    c.policy.term_tol = policy_for(o.tol, c.policy.radius).term_tol;
  }
  if (given("--radius")) c.policy.radius = c.sampler.radius = o.radius;
  if (given("--samples")) c.samples = o.samples;
  if (given("--terminating")) c.sampler.terminating = true;
  if (given("--non-terminating")) c.sampler.terminating = false;
  if (given("--threads")) c.threads = o.threads;
  if (given("--out")) c.output = o.out;
  if (given("--id")) {
    c.all_ids = false;
    c.ids = {o.id};
  }
  c.validate();
  return c;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "sampler seed");
  sub->add_option("--prec-bits", o.bits, "working precision in bits")->check(CLI::Range(64, 65536));
  sub->add_option("--tol", o.tol, "relative tolerance");
  sub->add_option("--radius", o.radius, "truncation radius")->check(CLI::PositiveNumber);
  sub->add_option("--config", o.config, "YAML suite config")->check(CLI::ExistingFile);
  sub->add_option("--out", o.out, "write the JSON report here");
  sub->add_flag("--terminating", o.terminating, "classical identities in terminating mode (default)");
  sub->add_flag("--non-terminating", o.non_terminating, "classical identities in convergent non-terminating mode");
}

void print_report(const CheckReport& r) {
  std::printf("%-22s #%-3ld %s  rel_error=%-10.3g lhs_terms=%ld rhs_terms=%ld%s%s\n", r.id.c_str(), r.sample,
              r.passed ? "PASS" : "FAIL", r.rel_error, r.lhs_diag.terms_evaluated, r.rhs_diag.terms_evaluated,
              r.error.empty() ? "" : "  ", r.error.c_str());
}

void print_summary(const SuiteResult& s) {
  for (const auto& g : s.groups) {
    std::printf("%-22s %ld/%ld passed  worst=%.3g  %.0f ms\n", g.id.c_str(), g.passed, g.checks, g.worst_rel_error,
                g.wall_time_ms);
  }
  std::printf("%ld checks, %ld failed, %.1f s\n", static_cast<long>(s.reports.size()), s.failed(), s.wall_time_ms / 1000);
}

int finish(const SuiteResult& s, const std::string& out) {
  if (!out.empty()) write_report(to_json(s), out);
  return s.all_passed() ? 0 : 1;
}

int cmd_list(const Options& o) {
  Json all = Json::array();
  for (const auto& d : list_identities()) {
    std::printf("%-22s %-9s %s\n", d.id.c_str(), d.mode == Mode::q ? "q" : "classical", d.title.c_str());
    Json schema = Json::array(), cons = Json::array(), degs = Json::array();
    for (const auto& e : d.schema) schema.push_back(e.length.empty() ? e.name : e.name + "[" + e.length + "]");
    for (const auto& c : d.constraints) cons.push_back(Json{{"kind", to_string(c.kind)}, {"expression", c.expression}});
    for (const auto& g : d.degenerations) degs.push_back(g.name);
    all.push_back(Json{{"id", d.id},
                       {"title", d.title},
                       {"mode", d.mode == Mode::q ? "q" : "classical"},
                       {"schema", schema},
                       {"constraints", cons},
                       {"dependent", d.dependent},
                       {"degenerations", degs},
                       {"finite", d.finite}});
  }
  if (!o.out.empty()) write_report(Json{{"schema_version", kReportSchemaVersion}, {"identities", all}}, o.out);
  return 0;
}

int cmd_check(const Options& o, CLI::App& app) {
  SuiteConfig c = resolve(o, app);
  if (!app.count("--samples")) c.samples = 1;
  if (o.params.empty()) {
    SuiteResult s = run_suite(c);
    for (const auto& r : s.reports) print_report(r);
    return finish(s, c.output);
  }
  std::ifstream in(o.params);
  if (!in) throw Error(ErrorCode::config_error, "cannot read parameter file '" + o.params + "'");
  ParamSet ps = param_set_from_json(Json::parse(in));
  SuiteResult s;
  s.config = to_json(c);
  s.reports.push_back(check(o.id, ps, c.policy, c.tolerance, c.sampler.seed));
  s.groups = summarize(s.reports);
  s.wall_time_ms = s.reports.front().wall_time_ms;
  print_report(s.reports.front());
  return finish(s, c.output);
}

int cmd_suite(const Options& o, CLI::App& app) {
  SuiteConfig c = resolve(o, app);
  SuiteResult s = run_suite(c);
  for (const auto& r : s.reports) {
    if (!r.passed) print_report(r);
  }
  print_summary(s);
  return finish(s, c.output);
}

int cmd_sweep(const Options& o, CLI::App& app) {
  SuiteConfig c = resolve(o, app);
  std::vector<long> radii = o.radii;
  if (radii.empty()) {
    for (long r = 4; r <= c.policy.radius; r += 4) radii.push_back(r);
  }
  c.sampler.radius = std::max(c.sampler.radius, *std::max_element(radii.begin(), radii.end()));
  ParamSet ps = sample(o.id, c.sampler, 1, c.bits).front();
  auto rows = radius_sweep(o.id, ps, radii);
  std::printf("%8s  %-12s %-12s %-12s %s\n", "radius", "|lhs-rhs|", "rel_error", "shell_tail", "converged");
  for (const auto& r : rows) {
    std::printf("%8ld  %-12.4g %-12.4g %-12.4g %s\n", r.radius, r.abs_error, r.rel_error, r.shell_tail,
                r.error.empty() ? (r.converged ? "yes" : "no") : r.error.c_str());
  }
  if (!c.output.empty()) {
    write_report(Json{{"schema_version", kReportSchemaVersion}, {"id", o.id}, {"params", to_json(ps)}, {"rows", to_json(rows)}},
                 c.output);
  }
  return 0;
}

int cmd_degenerations(const Options& o, CLI::App& app) {
  SuiteConfig c = resolve(o, app);
  const auto ids = c.resolved_ids();
  SuiteResult s;
  s.config = to_json(c);
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& id : ids) {
    const auto& d = lookup(id);
    if (d.degenerations.empty()) continue;
    long k = 0;
    for (auto& g : degenerate_suite(d, c.bits, c.sampler)) {
      CheckReport r = check(id, g.params, c.policy, c.tolerance, c.sampler.seed);
      r.sample = k++;
      std::printf("[%s] ", g.name.c_str());
      print_report(r);
      s.reports.push_back(std::move(r));
    }
  }
  s.groups = summarize(s.reports);
  s.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return finish(s, c.output);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiprecision verification of U(n) hypergeometric summation identities"};
  app.require_subcommand(1);
  Options o;

  auto* list = app.add_subcommand("list", "list the identity registry");
  list->add_option("--out", o.out, "write the registry as JSON");

  auto* chk = app.add_subcommand("check", "check sampled parameter sets of one identity");
  chk->add_option("--id", o.id, "identity id")->required();
  chk->add_option("--samples", o.samples, "number of samples (default 1)")->check(CLI::NonNegativeNumber);
  chk->add_option("--params", o.params, "check this JSON parameter set instead of sampling")->check(CLI::ExistingFile);
  add_common(chk, o);

  auto* suite = app.add_subcommand("suite", "run a suite over the registry");
  suite->add_option("--id", o.id, "restrict to one identity");
  suite->add_option("--samples", o.samples, "samples per identity")->check(CLI::NonNegativeNumber);
  suite->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  add_common(suite, o);

  auto* sweep = app.add_subcommand("sweep", "error against truncation radius");
  sweep->add_option("--id", o.id, "identity id")->required();
  sweep->add_option("--radii", o.radii, "radii to evaluate (default 4, 8, ... up to --radius)");
  add_common(sweep, o);

  auto* degs = app.add_subcommand("degenerations", "check the documented degenerate cases");
  degs->add_option("--id", o.id, "restrict to one identity");
  add_common(degs, o);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*list) return cmd_list(o);
    if (*chk) return cmd_check(o, *chk);
    if (*suite) return cmd_suite(o, *suite);
    if (*sweep) return cmd_sweep(o, *sweep);
    if (*degs) return cmd_degenerations(o, *degs);
  } catch (const Error& e) {
    std::fprintf(stderr, "kmverify: %s\n", e.what());
    return 2;
  } catch (const Json::exception& e) {
    std::fprintf(stderr, "kmverify: %s\n", e.what());
    return 2;
  }
  return 2;
}
