#include <gtest/gtest.h>

#include "kmv/harness.hpp"
#include "support.hpp"

using namespace kmv;
using kmv::testing::rel_diff;

namespace {

constexpr Bits kBits = 256;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::parse_error;
}

std::string dump(const std::vector<ParamSet>& sets) {
  Json j = Json::array();
  for (const auto& ps : sets) j.push_back(to_json(ps));
  return j.dump();
}

bool is_whole(const HValue& x) {
  const double re = std::stod(x.re().to_string());
  return x.im().is_zero() && rel_diff(x, HValue(x.bits(), std::lround(re))) == 0.0;
}

}  // namespace

TEST(Sampler, SameSeedSameSets) {
  SampleConfig cfg;
  cfg.seed = 123;
  for (const char* id : {"gustafson_6psi6", "cor_st", "cl_kmg"}) {
    EXPECT_EQ(dump(sample(id, cfg, 3, kBits)), dump(sample(id, cfg, 3, kBits))) << id;
    SampleConfig other = cfg;
    other.seed = 124;
    EXPECT_NE(dump(sample(id, cfg, 3, kBits)), dump(sample(id, other, 3, kBits))) << id;
  }
}

TEST(Sampler, PrefixStable) {
  SampleConfig cfg;
  auto few = sample("thm1", cfg, 2, kBits);
  auto more = sample("thm1", cfg, 4, kBits);
  EXPECT_EQ(dump(few), dump({more[0], more[1]}));
}

TEST(Sampler, SetsAreAdmissibleWithMargin) {
  SampleConfig cfg;
  cfg.seed = 31;
  for (const auto& d : list_identities()) {
    for (const auto& ps : sample(d, cfg, 3, kBits)) {
      EXPECT_TRUE(admissible(d, ps, cfg)) << d.id;
      EXPECT_NO_THROW(require_admissible(d, ps)) << d.id;
      EXPECT_EQ(ps.bits(), kBits);
      for (const auto& c : d.constraints) {
        if (c.kind != ConstraintKind::modulus_lt_1) continue;
        Measure m = c.measure(ps);
        EXPECT_LE(m.value, cfg.margin * m.bound) << d.id << ": " << c.expression;
      }
    }
  }
}

TEST(Sampler, DependentParameterSolvesEquality) {
  for (const auto& ps : sample("cor_csc", SampleConfig{}, 5, kBits)) {
    const HValue lhs = ps.product("b") * ps.product("z");
    EXPECT_LT(rel_diff(lhs, ps.q().pow(ps.integer("n"))), 1e-70);
  }
}

TEST(Sampler, TerminatingClassicalOrder) {
  SampleConfig cfg;
  for (const auto& ps : sample("cl_km", cfg, 8, kBits)) {
    const HValue& a = ps.scalar("a");
    ASSERT_TRUE(is_whole(a));
    EXPECT_GE(-std::lround(std::stod(a.re().to_string())), std::max(1L, ps.int_sum("m")));
  }
  cfg.terminating = false;
  for (const auto& ps : sample("cl_km", cfg, 8, kBits)) EXPECT_FALSE(is_whole(ps.scalar("a")));
}

TEST(Sampler, DegenerateSuiteCoversEveryCase) {
  for (const auto& d : list_identities()) {
    if (d.degenerations.empty()) continue;
    auto cases = degenerate_suite(d, kBits);
    ASSERT_EQ(cases.size(), d.degenerations.size()) << d.id;
    for (size_t i = 0; i < cases.size(); ++i) {
      EXPECT_EQ(cases[i].name, d.degenerations[i].name);
      CheckReport r = check(d.id, cases[i].params, policy_for(1e-18, 24), 1e-18);
      EXPECT_TRUE(r.passed) << d.id << " [" << cases[i].name << "] " << r.rel_error << " " << r.error;
    }
  }
}

TEST(Sampler, DegenerationOverridesApply) {
  auto cases = degenerate_suite("cl_kmg", kBits);
  for (const auto& c : cases) {
    const auto& ps = c.params;
    if (c.name == "d=b+1") {
      EXPECT_LT(rel_diff(ps.scalar("d"), ps.scalar("b") + 1), 1e-70);
    }
    if (c.name == "m=0") {
      for (long v : ps.ints("m")) EXPECT_EQ(v, 0);
    }
    if (c.name == "p=0") {
      EXPECT_EQ(ps.integer("p"), 0);
    }
  }
}

TEST(Sampler, NoDegenerations) {
  IdentityDescriptor d = lookup("cl_km");
  d.degenerations.clear();
  EXPECT_EQ(code_of([&] { degenerate_suite(d, kBits); }), ErrorCode::no_degenerations);
}

TEST(Sampler, ExhaustedAttempts) {
  IdentityDescriptor d = lookup("cl_km");
  d.constraints.push_back(Constraint{ConstraintKind::nonneg_integer, "never", 0,
                                     [](const ParamSet&) { return Measure{-1.0, 0.0}; }});
  SampleConfig cfg;
  cfg.max_attempts = 5;
  EXPECT_EQ(code_of([&] { sample(d, cfg, 1, kBits); }), ErrorCode::exhausted_attempts);
}

TEST(Sampler, UnknownId) { EXPECT_EQ(code_of([] { sample("nope", SampleConfig{}, 1); }), ErrorCode::unknown_identity); }

TEST(Sampler, ConfigValidation) {
  auto bad = [](auto edit) {
    SampleConfig cfg;
    edit(cfg);
    return code_of([&] { cfg.validate(); });
  };
  EXPECT_EQ(bad([](SampleConfig& c) { c.margin = 1.5; }), ErrorCode::config_error);
  EXPECT_EQ(bad([](SampleConfig& c) { c.q_hi = 1.0; }), ErrorCode::config_error);
  EXPECT_EQ(bad([](SampleConfig& c) { c.target_hi = 0.9; }), ErrorCode::config_error);
  EXPECT_EQ(bad([](SampleConfig& c) { c.n = {3, 1}; }), ErrorCode::config_error);
  EXPECT_EQ(bad([](SampleConfig& c) { c.radius = 0; }), ErrorCode::config_error);
}

TEST(Sampler, DimensionRangesRespected) {
  SampleConfig cfg;
  cfg.n = {2, 2};
  for (const auto& ps : sample("gustafson_6psi6", cfg, 4, kBits)) EXPECT_EQ(ps.vec("z").size(), 2u);
}
