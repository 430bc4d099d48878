#include <gtest/gtest.h>

#include <set>

#include "kmv/harness.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace kmv;
using kmv::testing::rel_diff;

namespace {

constexpr Bits kBits = 256;

std::vector<std::string> all_ids() {
  std::vector<std::string> ids;
  for (const auto& d : list_identities()) ids.push_back(d.id);
  return ids;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::parse_error;
}

}  // namespace

TEST(Registry, UniqueIdsAndCompleteDescriptors) {
  const auto& reg = list_identities();
  EXPECT_EQ(reg.size(), 32u);
  std::set<std::string> seen;
  for (const auto& d : reg) {
    EXPECT_TRUE(seen.insert(d.id).second) << d.id;
    EXPECT_FALSE(d.title.empty()) << d.id;
    EXPECT_FALSE(d.schema.empty()) << d.id;
    EXPECT_FALSE(d.constraints.empty()) << d.id;
    EXPECT_TRUE(d.lhs && d.rhs && d.draw) << d.id;
    EXPECT_EQ(&lookup(d.id), &d);
  }
}

TEST(Registry, UnknownId) {
  EXPECT_EQ(code_of([] { lookup("no_such_identity"); }), ErrorCode::unknown_identity);
  CheckReport r = check("no_such_identity", ParamSet(kBits), TruncationPolicy{}, 1e-18);
  EXPECT_FALSE(r.passed);
  EXPECT_NE(r.error.find("UnknownIdentity"), std::string::npos);
}

class EveryIdentity : public ::testing::TestWithParam<std::string> {};

TEST_P(EveryIdentity, SampledSetsSatisfyTheIdentity) {
  SampleConfig cfg;
  cfg.seed = 77;
  for (const auto& ps : sample(GetParam(), cfg, 2, kBits)) {
    CheckReport r = check(GetParam(), ps, policy_for(1e-18, 24), 1e-18);
    EXPECT_TRUE(r.passed) << r.id << " rel " << r.rel_error << " " << r.error;
    EXPECT_TRUE(r.lhs_diag.converged && r.rhs_diag.converged);
  }
}

INSTANTIATE_TEST_SUITE_P(All, EveryIdentity, ::testing::ValuesIn(all_ids()),
                         [](const auto& info) { return info.param; });

TEST(Schema, MissingSlot) {
  ParamSet ps = sample("cor_csc", SampleConfig{}, 1, kBits).front();
  ParamSet bad(kBits);
  bad.set_q(ps.q().value());
  for (const auto& [k, v] : ps.integers()) bad.set_int(k, v);
  for (const auto& [k, v] : ps.int_vectors()) bad.set_ints(k, v);
  for (const auto& [k, v] : ps.vectors()) {
    if (k != "a") bad.set_vec(k, v);
  }
  EXPECT_EQ(code_of([&] { require_admissible(lookup("cor_csc"), bad); }), ErrorCode::invalid_argument);
}

TEST(Schema, WrongLength) {
  ParamSet ps = sample("gustafson_6psi6", SampleConfig{}, 1, kBits).front();
  auto z = ps.vec("z");
  z.push_back(z.front());
  ps.set_vec("z", z);
  EXPECT_EQ(code_of([&] { require_admissible(lookup("gustafson_6psi6"), ps); }), ErrorCode::invalid_argument);
}

TEST(Schema, BaseOnlyInQMode) {
  ParamSet ps = sample("cl_km", SampleConfig{}, 1, kBits).front();
  ps.set_q(HValue::parse("0.5", kBits));
  EXPECT_EQ(code_of([&] { require_admissible(lookup("cl_km"), ps); }), ErrorCode::invalid_argument);
}

TEST(Constraints, BrokenEqualityIsReported) {
  ParamSet ps = sample("cor_csc", SampleConfig{}, 1, kBits).front();
  auto b = ps.vec("b");
  b[0] *= HValue(kBits, 2);
  ps.set_vec("b", b);
  EXPECT_NE(violated_constraint(lookup("cor_csc"), ps), nullptr);
  EXPECT_EQ(code_of([&] { lhs_eval("cor_csc", ps, TruncationPolicy{}); }), ErrorCode::constraint_violated);
}

TEST(Constraints, KindsAreNamed) {
  std::set<std::string> kinds;
  for (const auto& d : list_identities()) {
    for (const auto& c : d.constraints) kinds.insert(std::string(to_string(c.kind)));
  }
  EXPECT_TRUE(kinds.count("modulus_lt_1"));
  EXPECT_TRUE(kinds.count("exact_equality"));
  EXPECT_TRUE(kinds.count("nonvanishing_denominator"));
}

// with m = 0 the series collapses to 2F1(-M, b; b+1; 1)
TEST(ClassicalKm, ZeroShiftsMatchChuVandermonde) {
  SampleConfig cfg;
  cfg.seed = 5;
  for (const auto& ps : sample(lookup("cl_km"), cfg, 6, kBits, {{"m_zero", 1}})) {
    for (long v : ps.ints("m")) ASSERT_EQ(v, 0);
    const long M = -std::lround(std::stod(ps.scalar("a").re().to_string()));
    ASSERT_GE(M, 1);
    const HValue& b = ps.scalar("b");
    const HValue direct = oracle::gauss_terminating_sum(M, b, b + 1);
    const HValue closed = oracle::chu_vandermonde(M, b, b + 1);
    EXPECT_LT(rel_diff(direct, closed), 1e-60);
    const TruncationPolicy pol = policy_for(1e-25, 24);
    EXPECT_LT(rel_diff(lhs_eval("cl_km", ps, pol).value, direct), 1e-60);
    EXPECT_LT(rel_diff(rhs_eval("cl_km", ps, pol).value, closed), 1e-60);
  }
}

TEST(LayerExchange, BothOrdersHold) {
  SampleConfig cfg;
  cfg.seed = 9;
  for (auto ps : sample("eq_pbt", cfg, 4, kBits)) {
    const TruncationPolicy pol = policy_for(1e-25, 24);
    EXPECT_TRUE(check("eq_pbt", ps, pol, 1e-25).passed);
    const long N = ps.integer("N"), L = ps.integer("L");
    ps.set_int("N", L);
    ps.set_int("L", N);
    EXPECT_TRUE(check("eq_pbt", ps, pol, 1e-25).passed);
  }
}

TEST(LayerExchange, EqualOffsetsAreTrivial) {
  ParamSet ps = sample(lookup("eq_pbt"), SampleConfig{}, 1, kBits, {{"N", 1}, {"L", 1}}).front();
  const TruncationPolicy pol = policy_for(1e-25, 24);
  EXPECT_LT(rel_diff(lhs_eval("eq_pbt", ps, pol).value, rhs_eval("eq_pbt", ps, pol).value), 1e-70);
}
