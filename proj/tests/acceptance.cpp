// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "kmv/harness.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace kmv;

namespace {

constexpr Bits kBits = 256;

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double since_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

double worst_of(const SuiteResult& s) {
  double w = 0;
  for (const auto& r : s.reports) w = std::max(w, r.rel_error);
  return w;
}

std::string first_failure(const SuiteResult& s) {
  for (const auto& r : s.reports) {
    if (!r.passed) {
      return r.id + "#" + std::to_string(r.sample) + " rel=" + fmt("%.3g", r.rel_error) +
             (r.error.empty() ? "" : " " + r.error);
    }
  }
  return "";
}

// 1 -------------------------------------------------------------------------------

Outcome full_registry() {
  SuiteConfig c;
  c.samples = 5;
  c.tolerance = 1e-18;
  c.bits = kBits;
  c.policy = policy_for(c.tolerance, 24);
  c.threads = 0;
  auto res = run_suite(c);
  const double secs = res.wall_time_ms / 1000;
  Outcome o;
  o.ok = res.all_passed() && res.groups.size() == list_identities().size() && secs <= 900;
  o.detail = std::to_string(res.reports.size()) + " checks over " + std::to_string(res.groups.size()) +
             " ids, worst " + fmt("%.3g", worst_of(res)) + ", " + fmt("%.1f s", secs);
  if (!res.all_passed()) o.detail += "; first failure " + first_failure(res);
  return o;
}

// 2 -------------------------------------------------------------------------------

Outcome exact_finite() {
  SuiteConfig c;
  c.all_ids = false;
  c.ids = {"cor_kajihara_bailey", "cor_pkb", "eq_pbt", "cor_milne_saalschutz", "cor_milne_dougall",
           "cor_mnc", "cor_mnb", "cor_kajihara_watson"};
  c.samples = 25;
  c.tolerance = 1e-25;
  c.bits = kBits;
  c.policy = policy_for(c.tolerance, 24);
  auto res = run_suite(c);
  Outcome o;
  o.ok = res.all_passed() && res.reports.size() == 8 * 25;
  for (const auto& r : res.reports) {
    o.ok = o.ok && r.lhs_diag.terminating && r.rhs_diag.terminating;
  }
  o.detail = std::to_string(res.reports.size()) + " checks, worst " + fmt("%.3g", worst_of(res));
  if (!res.all_passed()) o.detail += "; first failure " + first_failure(res);
  return o;
}

// 3 -------------------------------------------------------------------------------

Outcome thm1_to_gustafson() {
  const auto& thm1 = lookup("thm1");
  const auto& gus = lookup("gustafson_6psi6");
  SampleConfig cfg;
  std::mt19937_64 rng(3);
  double worst_term = 0, worst_total = 0;
  long points = 0;
  for (long n : {2, 3, 3}) {
    auto sets = sample(thm1, cfg, 1, kBits, {{"m_zero", 1}, {"n", n}});
    const ParamSet& ps = sets.front();
    ParamSet g(kBits);
    g.set_q(ps.q().value());
    g.set_int("n", n);
    for (const char* k : {"a", "b", "z"}) g.set_vec(k, ps.vec(k));
    require_admissible(gus, g);
    Side s1 = thm1.lhs(ps), s2 = gus.lhs(g);
    TermEvaluator e1(s1.series->term, true), e2(s2.series->term, true);
    std::uniform_int_distribution<long> coord(-6, 6);
    for (int i = 0; i < 20; ++i, ++points) {
      std::vector<long> y(static_cast<size_t>(n));
      long sum = 0;
      for (long k = 0; k + 1 < n; ++k) sum += (y[static_cast<size_t>(k)] = coord(rng));
      y.back() = -sum;
      worst_term = std::max(worst_term, relative_error(e1(y), e2(y)));
    }
    TruncationPolicy pol = policy_for(1e-20, 24);
    worst_total = std::max(worst_total, relative_error(evaluate_side(s1, pol).value, evaluate_side(s2, pol).value));
  }
  Outcome o;
  o.ok = worst_term <= 1e-25 && worst_total <= 1e-20;
  o.detail = std::to_string(points) + " lattice points, worst term " + fmt("%.3g", worst_term) + ", worst total " +
             fmt("%.3g", worst_total);
  return o;
}

// 4 -------------------------------------------------------------------------------

Outcome kmg_single_term() {
  const auto& kmg = lookup("cl_kmg");
  const auto& km = lookup("cl_km");
  auto sets = sample(kmg, SampleConfig{}, 10, kBits, {{"d_eq_b1", 1}});
  for (auto& g : degenerate_suite(kmg, kBits)) {
    if (g.name == "d=b+1") sets.push_back(g.params);
  }
  TruncationPolicy pol = policy_for(1e-25, 24);
  Outcome o;
  double worst_one = 0, worst_km = 0;
  for (const auto& ps : sets) {
    Side rhs = kmg.rhs(ps);
    SumResult box = sum_series(*rhs.series, pol);
    if (box.diag.nonzero_terms != 1) {
      o.ok = false;
      o.detail = std::to_string(box.diag.nonzero_terms) + " nonzero box terms; ";
    }
    worst_one = std::max(worst_one, relative_error(box.value, HValue(kBits, 1)));
    worst_km = std::max(worst_km, relative_error(evaluate_side(rhs, pol).value, evaluate_side(km.rhs(ps), pol).value));
  }
  o.ok = o.ok && worst_one <= 1e-25 && worst_km <= 1e-25;
  o.detail += std::to_string(sets.size()) + " sets, box sum - 1: " + fmt("%.3g", worst_one) +
              ", against the Karlsson-Minton closed form: " + fmt("%.3g", worst_km);
  return o;
}

// 5 -------------------------------------------------------------------------------

Outcome kmg_vs_us() {
  const auto& kmg = lookup("cl_kmg");
  const auto& us = lookup("cl_us");
  auto sets = sample(kmg, SampleConfig{}, 10, kBits);
  TruncationPolicy pol = policy_for(1e-18, 24);
  double worst = 0;
  bool terminating = true;
  for (const auto& ps : sets) {
    require_admissible(us, ps);
    const HValue& a = ps.scalar("a");
    const double ar = a.re().to_double();
    terminating = terminating && a.im().is_zero() && ar < 0 && ar == std::round(ar);
    worst = std::max(worst, relative_error(evaluate_side(kmg.rhs(ps), pol).value, evaluate_side(us.rhs(ps), pol).value));
  }
  Outcome o;
  o.ok = terminating && worst <= 1e-18;
  o.detail = "10 terminating sets, worst " + fmt("%.3g", worst);
  return o;
}

// 6 -------------------------------------------------------------------------------

Outcome st_permutation() {
  const auto& st = lookup("cor_st");
  SampleConfig cfg;
  cfg.radius = 40;
  auto sets = sample(st, cfg, 10, kBits, {{"permute", 1}});
  TruncationPolicy pol = policy_for(1e-25, 40);
  double worst = 0;
  bool ok = true;
  for (const auto& ps : sets) {
    CheckReport r = check("cor_st", ps, pol, 1e-25);
    ok = ok && r.passed;
    worst = std::max(worst, r.rel_error);
  }
  Outcome o;
  o.ok = ok;
  o.detail = "10 samples at radius 40, worst " + fmt("%.3g", worst);
  return o;
}

// 7 -------------------------------------------------------------------------------

Outcome oracles() {
  Outcome o;
  TruncationPolicy pol = policy_for(1e-25, 24);
  // U(2) hyperplane sum as Bailey's 6psi6 with a = z1/z2 and numerator
  // parameters a1 z1, a2 z1, q/(b1 z2), q/(b2 z2).
  double worst_g = 0, worst_closed = 0;
  for (const auto& ps : sample(lookup("gustafson_6psi6"), SampleConfig{}, 10, kBits, {{"n", 2}})) {
    const HValue q = ps.q().value();
    const auto &a = ps.vec("a"), &b = ps.vec("b"), &z = ps.vec("z");
    const HValue alpha = z[0] / z[1];
    std::vector<HValue> u = {a[0] * z[0], a[1] * z[0], q / (b[0] * z[1]), q / (b[1] * z[1])};
    HValue direct = oracle::bailey_sum(alpha, u, q, 120);
    worst_closed = std::max(worst_closed, relative_error(direct, oracle::bailey_closed(alpha, u, q)));
    worst_g = std::max(worst_g, relative_error(direct, lhs_eval("gustafson_6psi6", ps, pol).value));
    worst_g = std::max(worst_g, relative_error(direct, rhs_eval("gustafson_6psi6", ps, pol).value));
  }
  // one-variable case against the terminating q-Saalschutz 3phi2
  double worst_s = 0;
  for (const auto& ps : sample(lookup("cor_milne_saalschutz"), SampleConfig{}, 10, kBits, {{"n", 1}})) {
    const HValue q = ps.q().value();
    const HValue A = ps.scalar("a"), B = ps.scalar("b") * ps.vec("z")[0], C = ps.scalar("c");
    const long N = ps.ints("m")[0];
    HValue direct = oracle::saalschutz_sum(A, B, C, N, q);
    HValue closed = oracle::saalschutz_closed(A, B, C, N, q);
    worst_s = std::max(worst_s, relative_error(direct, closed));
    worst_s = std::max(worst_s, relative_error(direct, lhs_eval("cor_milne_saalschutz", ps, pol).value));
    worst_s = std::max(worst_s, relative_error(closed, rhs_eval("cor_milne_saalschutz", ps, pol).value));
  }
  o.ok = worst_g <= 1e-20 && worst_closed <= 1e-20 && worst_s <= 1e-25;
  o.detail = "6psi6 (n = 2): " + fmt("%.3g", worst_g) + " (oracle vs its closed form " + fmt("%.3g", worst_closed) +
             "); 3phi2 (n = 1): " + fmt("%.3g", worst_s);
  return o;
}

// 8 -------------------------------------------------------------------------------

Outcome kernel_invariants() {
  Outcome o;
  const int cases = 1000;
  for (Bits bits : {Bits(128), Bits(256)}) {
    std::mt19937_64 rng(bits);
    const double eps = testing::eps_of(bits);
    std::uniform_int_distribution<long> kk(-20, 20), kpos(0, 20), mm(0, 30);
    auto draw = [&](double lo, double hi) { return testing::random_complex(rng, bits, lo, hi); };
    int bad[4] = {0, 0, 0, 0};
    double worst[4] = {0, 0, 0, 0};
    for (int i = 0; i < cases; ++i) {
      QBase q(draw(0.2, 0.7));
      const HValue a = draw(0.3, 2.0);
      // recurrence across the two branches
      long k = kk(rng);
      HValue lhs = qpoch_finite(a, q, k + 1);
      const HValue qw = with_bits(q.value(), bits + 64);
      const HValue factor = with_bits(HValue(bits + 64, 1) - with_bits(a, bits + 64) * pow(qw, k), bits);
      HValue rhs = qpoch_finite(a, q, k) * factor;
      double e = relative_error(lhs, rhs) / eps;
      worst[0] = std::max(worst[0], e);
      bad[0] += e > 10;
      // negative index against the positive-index product of shifted argument
      k = kpos(rng);
      // the shifted argument is formed with extra bits and rounded once
      const HValue shifted = with_bits(with_bits(a, bits + 64) / pow(qw, k), bits);
      e = relative_error(qpoch_finite(a, q, -k) * qpoch_finite(shifted, q, k), HValue(bits, 1)) / eps;
      worst[1] = std::max(worst[1], e);
      bad[1] += e > 10;
      // product splitting of the infinite product
      long m = mm(rng);
      auto full = qpoch_inf_detail(a, q);
      auto rest = qpoch_inf_detail(a * q.pow(m), q);
      HValue split = qpoch_finite(a, q, m) * rest.product.resolve();
      const double trunc = full.tail_bound + rest.tail_bound +
                           static_cast<double>(full.factors + rest.factors + m) * eps;
      e = relative_error(full.product.resolve(), split);
      worst[2] = std::max(worst[2], e / trunc);
      bad[2] += e > trunc;
      // rising factorial against the gamma ratio
      const HValue c = draw(0.3, 6.0);
      k = kpos(rng);
      e = relative_error(poch_classical(c, k), exp(log_gamma(c + k) - log_gamma(c))) / eps;
      worst[3] = std::max(worst[3], e);
      bad[3] += e > 100;
    }
    std::ostringstream d;
    d << bits << " bits: recurrence " << bad[0] << " bad (worst " << fmt("%.1f", worst[0]) << " eps), branches "
      << bad[1] << " (" << fmt("%.1f", worst[1]) << " eps), splitting " << bad[2] << " ("
      << fmt("%.2f", worst[2]) << " of budget), gamma " << bad[3] << " (" << fmt("%.1f", worst[3]) << " eps); ";
    o.detail += d.str();
    o.ok = o.ok && bad[0] + bad[1] + bad[2] + bad[3] == 0;
  }
  return o;
}

// 9 -------------------------------------------------------------------------------

Outcome truncation_honesty() {
  const long R = 24;
  TruncationPolicy pol = policy_for(1e-18, R);
  pol.early_stop = false;
  TruncationPolicy wider = pol;
  wider.radius = R + 2;
  long converged = 0, honest = 0;
  std::string worst_id;
  double worst_ratio = 0;
  for (long round = 0; converged < 50 && round < 20; ++round) {
    for (const auto& d : list_identities()) {
      if (converged >= 50) break;
      if (d.finite || d.mode != Mode::q) continue;
      SampleConfig cfg;
      cfg.seed = 1000 + static_cast<std::uint64_t>(round);
      cfg.radius = R + 2;
      ParamSet ps = sample(d, cfg, 1, kBits).front();
      Side lhs = d.lhs(ps);
      if (!lhs.series) continue;
      SideValue v1 = evaluate_side(lhs, pol);
      if (!v1.diag.converged || v1.diag.terminating) continue;
      SideValue v2 = evaluate_side(lhs, wider);
      ++converged;
      HValue diff = v1.value - v2.value;
      const double change = diff.is_zero() ? 0.0 : std::exp2(diff.log2_abs());
      const double ratio = change / (10 * v1.diag.largest_shell_tail);
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        worst_id = d.id;
      }
      honest += ratio <= 1.0;
    }
  }
  Outcome o;
  o.ok = converged >= 50 && honest * 100 >= 95 * converged;
  o.detail = std::to_string(honest) + "/" + std::to_string(converged) + " converged checks within 10 x tail at R = " +
             std::to_string(R) + " (largest change/(10 x tail) " + fmt("%.3g", worst_ratio) + " on " + worst_id + ")";
  return o;
}

// 10 ------------------------------------------------------------------------------

Outcome determinism() {
  SuiteConfig c;
  c.samples = 2;
  c.bits = kBits;
  c.threads = 1;
  const std::string a = dump_report(without_timing(to_json(run_suite(c))));
  const std::string b = dump_report(without_timing(to_json(run_suite(c))));
  c.threads = 4;
  const std::string p = dump_report(without_timing(to_json(run_suite(c))));
  // the thread count is not part of the report, so the documents must match
  Outcome o;
  o.ok = a == b && a == p;
  o.detail = std::string("repeat run ") + (a == b ? "identical" : "differs") + ", serial vs 4 threads " +
             (a == p ? "identical" : "differs") + " (" + std::to_string(a.size()) + " bytes)";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "full registry, 5 samples each at 256 bits, rel <= 1e-18 within 15 min", full_registry},
      {2, "exact finite identities, 25 samples each, rel <= 1e-25", exact_finite},
      {3, "thm1 with m = 0 against gustafson_6psi6: terms 1e-25, totals 1e-20", thm1_to_gustafson},
      {4, "cl_kmg at d = b+1: one nonzero box term equal to 1 within 1e-25", kmg_single_term},
      {5, "rhs(cl_kmg) = rhs(cl_us) to 1e-18 on 10 terminating sets", kmg_vs_us},
      {6, "cor_st with w a permutation of z: 1e-25 on 10 samples", st_permutation},
      {7, "independent 6psi6 (1e-20) and 3phi2 Saalschutz (1e-25) oracles", oracles},
      {8, "mparith invariants, 1000 cases each at 128 and 256 bits", kernel_invariants},
      {9, "truncation honesty on 50 converged checks (>= 95%)", truncation_honesty},
      {10, "determinism and serial = parallel", determinism},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += o.ok ? 0 : 1;
    std::printf("criterion %2d %s  %s  [%s] (%.1f s)\n", c.number, o.ok ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                since_ms(t0) / 1000);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
