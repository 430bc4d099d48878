#include <gtest/gtest.h>

#include <random>

#include "kmv/series.hpp"
#include "support.hpp"

using namespace kmv;
using kmv::testing::num;
using kmv::testing::random_complex;
using kmv::testing::rel_diff;

namespace {

constexpr Bits kBits = 192;

QBase test_q() { return QBase(num("0.35", "0.3", kBits)); }

}  // namespace

TEST(Affine, Forms) {
  std::vector<long> y{2, -1, 5};
  EXPECT_EQ(Affine::coord(3, 1)(y), -1);
  EXPECT_EQ(Affine::total(3)(y), 6);
  EXPECT_EQ(Affine::prefix(3, 2)(y), 1);
  EXPECT_EQ((Affine::coord(3, 0) + Affine::total(3) + 4)(y), 12);
  EXPECT_EQ((-Affine::coord(3, 2))(y), -5);
  EXPECT_EQ(Affine::coord(3, 2).single_coordinate(), 2);
  EXPECT_EQ(Affine::total(3).single_coordinate(), -1);
  EXPECT_TRUE(Affine::total(3).is_total());
  std::vector<long> lo{-1, 0, 2}, hi{1, 3, 2};
  auto r = (Affine::coord(3, 0) - Affine::coord(3, 1) + 1).range(lo, hi);
  EXPECT_EQ(r.first, -3);
  EXPECT_EQ(r.second, 2);
}

TEST(TermEvaluator, TabulatedMatchesReference) {
  std::mt19937_64 rng(11);
  QBase q = test_q();
  const size_t n = 3;
  TermSpec spec(n, Mode::q, q, kBits);
  std::vector<HValue> z;
  for (size_t k = 0; k < n; ++k) z.push_back(random_complex(rng, kBits, 0.4, 1.8));
  spec.vandermonde(z);
  for (size_t k = 0; k < n; ++k) {
    spec.num(random_complex(rng, kBits, 0.3, 2.0), Affine::coord(n, k));
    spec.den(random_complex(rng, kBits, 0.3, 2.0), Affine::coord(n, k));
    spec.well_poised(random_complex(rng, kBits, 0.3, 2.0), Affine::coord(n, k) + Affine::total(n));
  }
  spec.num(random_complex(rng, kBits, 0.3, 2.0), Affine::total(n));
  spec.den(random_complex(rng, kBits, 0.3, 2.0), Affine::prefix(n, 2));
  spec.power(random_complex(rng, kBits, 0.3, 2.0), Affine::total(n));
  spec.gauss(q.value(), Affine::total(n));
  TermEvaluator tab(spec, true), ref(spec, false);
  std::uniform_int_distribution<long> idx(-9, 9);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<long> y{idx(rng), idx(rng), idx(rng)};
    EXPECT_LT(rel_diff(tab(y), ref(y)), 1e-50);
  }
}

TEST(TermEvaluator, ClassicalTabulatedMatchesReference) {
  std::mt19937_64 rng(12);
  const size_t n = 2;
  TermSpec spec(n, Mode::classical, std::nullopt, kBits);
  spec.vandermonde({num("0.3", kBits), num("1.7", kBits)});
  spec.num(num("0.45", kBits), Affine::coord(n, 0));
  spec.den(num("2.35", kBits), Affine::coord(n, 1));
  spec.num(num("-1.5", "0.25", kBits), Affine::total(n));
  spec.well_poised(num("0.8", kBits), Affine::coord(n, 0));
  TermEvaluator tab(spec, true), ref(spec, false);
  std::uniform_int_distribution<long> idx(-8, 8);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<long> y{idx(rng), idx(rng)};
    EXPECT_LT(rel_diff(tab(y), ref(y)), 1e-50);
  }
}

TEST(TermEvaluator, ZeroOutweighingPoleCountsAsHit) {
  QBase q = test_q();
  TermSpec spec(1, Mode::q, q, kBits);
  // (q^-2)_y / (q^-1)_y: at y = 3 the numerator has one zero and the
  // denominator one zero too
  spec.num(q.pow(-2), Affine::coord(1, 0));
  spec.num(q.pow(-2), Affine::coord(1, 0));
  spec.den(q.pow(-1), Affine::coord(1, 0));
  TermEvaluator ev(spec, true);
  std::vector<long> y{3};
  EXPECT_TRUE(ev(y).is_zero());
  EXPECT_EQ(ev.pole_hits(), 1);
  TermSpec bad(1, Mode::q, q, kBits);
  bad.den(q.pow(-1), Affine::coord(1, 0));
  TermEvaluator ev2(bad, false);
  try {
    ev2(y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::pole_in_term);
  }
}

TEST(TerminationBounds, Detected) {
  QBase q = test_q();
  TermSpec spec(2, Mode::q, q, kBits);
  spec.num(q.pow(-3), Affine::coord(2, 0));      // y0 <= 3
  spec.den(q.value(), Affine::coord(2, 1));      // y1 >= 0
  spec.num(q.pow(-5), Affine::total(2) + 1);     // |y| <= 4
  spec.den(num("0.5", kBits), Affine::coord(2, 1));
  IndexBounds b = termination_bounds(spec);
  EXPECT_EQ(b.hi[0], 3);
  EXPECT_EQ(b.lo[1], 0);
  EXPECT_EQ(b.total_hi, 4);
  EXPECT_LE(b.lo[0], -kUnbounded);

  TermSpec cl(1, Mode::classical, std::nullopt, kBits);
  cl.num(num("-2", kBits), Affine::coord(1, 0));
  cl.den(num("3", kBits), Affine::coord(1, 0));
  IndexBounds c = termination_bounds(cl);
  EXPECT_EQ(c.hi[0], 2);
  EXPECT_EQ(c.lo[0], -2);
}

TEST(Series, TerminatingBilateralIsExact) {
  // sum_y (a)_y (q^-3)_y / ((q)_y (b)_y) z^y is a terminating 2phi1
  QBase q = test_q();
  TermSpec spec(1, Mode::q, q, kBits);
  HValue a = num("0.4", "0.1", kBits), b = num("1.3", "-0.2", kBits), z = num("0.7", kBits);
  spec.num(a, Affine::coord(1, 0)).num(q.pow(-3), Affine::coord(1, 0));
  spec.den(q.value(), Affine::coord(1, 0)).den(b, Affine::coord(1, 0));
  spec.power(z, Affine::coord(1, 0));
  Series s{spec, Domain::lattice(1)};
  TruncationPolicy pol;
  SumResult r = sum_series(s, pol);
  EXPECT_TRUE(r.diag.terminating);
  EXPECT_EQ(r.diag.terms_evaluated, 4);
  HValue direct(kBits);
  for (long k = 0; k <= 3; ++k) {
    direct += qpoch_finite(a, q, k) * qpoch_finite(q.pow(-3), q, k) * pow(z, k) /
              (qpoch_finite(q.value(), q, k) * qpoch_finite(b, q, k));
  }
  EXPECT_LT(rel_diff(r.value, direct), 1e-50);
}

TEST(Series, ClearanceSeesNearPole) {
  QBase q = test_q();
  TermSpec spec(1, Mode::q, q, kBits);
  HValue near = q.pow(-2) * num("1.001", kBits);
  spec.den(near, Affine::coord(1, 0));
  Series s{spec, Domain::orthant(1)};
  EXPECT_LT(series_clearance(s, 5), 0.01);
  Series far{TermSpec(1, Mode::q, q, kBits), Domain::orthant(1)};
  EXPECT_EQ(series_clearance(far, 5), INFINITY);
}

TEST(Prefactor, GammaLogAccumulation) {
  Prefactor p(Mode::classical, std::nullopt, kBits);
  p.gamma(num("5", kBits)).gamma_den(num("3", kBits)).poch(num("2", kBits), 3);
  // 24 / 2 * (2*3*4)
  EXPECT_LT(rel_diff(p.evaluate().resolve(), num("288", kBits)), 1e-50);
  Prefactor z(Mode::classical, std::nullopt, kBits);
  z.gamma_den(num("-2", kBits)).gamma(num("0.5", kBits));
  EXPECT_TRUE(z.evaluate().resolve().is_zero());
  Prefactor pole(Mode::classical, std::nullopt, kBits);
  pole.gamma(num("0", kBits));
  EXPECT_THROW(pole.evaluate().resolve(), Error);
  EXPECT_LT(pole.clearance(), 1e-10);
}

TEST(Prefactor, QProducts) {
  QBase q(num("0.5", kBits));
  Prefactor p(Mode::q, q, kBits);
  p.qinf(num("0.5", kBits)).qinf_den(num("0.5", kBits) * q.pow(5)).poch_den(num("0.5", kBits), 5);
  EXPECT_LT(rel_diff(p.evaluate().resolve(), HValue(kBits, 1)), 1e-50);
  Prefactor d(Mode::q, q, kBits);
  d.qinf_den(q.pow(-3) * num("1.002", kBits));
  EXPECT_LT(d.clearance(), 0.01);
}
