#include <gtest/gtest.h>

#include <random>

#include "kmv/mparith.hpp"
#include "support.hpp"

using namespace kmv;
using kmv::testing::num;
using kmv::testing::rel_diff;

namespace {

QBase half_q(Bits bits = 256) { return QBase(num("0.5", bits)); }

// (x;x)_inf from Euler's pentagonal number theorem, summed independently.
HValue pentagonal(const char* x, Bits bits) {
  Real xr = Real::parse(x, bits);
  Real acc(bits, 1), t(bits);
  for (long k = 1; k < 200; ++k) {
    for (long s : {k * (3 * k - 1) / 2, k * (3 * k + 1) / 2}) {
      mpfr_pow_ui(t.get(), xr.get(), static_cast<unsigned long>(s), MPFR_RNDN);
      if (k % 2) mpfr_sub(acc.get(), acc.get(), t.get(), MPFR_RNDN);
      else mpfr_add(acc.get(), acc.get(), t.get(), MPFR_RNDN);
    }
  }
  return HValue(acc, Real(bits));
}

}  // namespace

TEST(Real, DecimalRoundTrip) {
  Real x = Real::parse("0.1", 256);
  EXPECT_EQ(Real::parse(x.to_string(), 256), x);
  Real y = Real::parse("-12345.678e-40", 128);
  EXPECT_EQ(Real::parse(y.to_string(), 128), y);
  EXPECT_EQ(Real(64).to_string(), "0");
  EXPECT_THROW(Real::parse("1.2x", 64), Error);
}

TEST(Real, MoveLeavesAssignableShell) {
  Real a(128, 3);
  Real b(std::move(a));
  a = Real(128, 5);
  EXPECT_EQ(a.to_double(), 5.0);
  EXPECT_EQ(b.to_double(), 3.0);
}

TEST(PrecisionContext, EpsAndFloor) {
  PrecisionContext c(100);
  Real e = c.eps();
  EXPECT_EQ(e.exponent(), -98);  // 2^-99 = 0.5 * 2^-98
  EXPECT_THROW(PrecisionContext(63), Error);
  EXPECT_EQ(PrecisionContext::for_tolerance(1e-20).bits, 133 + 64);
}

TEST(HValue, PrecisionMismatchThrows) {
  HValue a(128, 1), b(256, 1);
  try {
    (void)(a + b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::precision_mismatch);
  }
}

TEST(HValue, ComplexArithmetic) {
  HValue a = num("1", "2", 128), b = num("3", "-1", 128);
  HValue p = a * b;
  EXPECT_EQ(p.re().to_double(), 5.0);
  EXPECT_EQ(p.im().to_double(), 5.0);
  EXPECT_LT(rel_diff(p / b, a), 1e-36);
  EXPECT_LT(rel_diff(exp(log(a)), a), 1e-36);
  EXPECT_LT(rel_diff(pow(a, -3) * pow(a, 3), HValue(128, 1)), 1e-36);
  EXPECT_LT(rel_diff(pow(root(b, 5), 5), b), 1e-36);
}

TEST(QPoch, Examples) {
  QBase q = half_q();
  EXPECT_EQ(qpoch_finite(num("0.3"), q, 0), HValue(256, 1));
  EXPECT_LT(rel_diff(qpoch_finite(num("0.5"), q, 3), num("0.328125")), 1e-70);
  EXPECT_LT(rel_diff(qpoch_finite(num("0.25"), q, -1), num("2")), 1e-70);
}

TEST(QPoch, VanishingNegativeFactorIsPole) {
  QBase q = half_q();
  // a q^-2 = 1
  try {
    qpoch_finite(num("0.25"), q, -3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::division_by_zero_pole);
  }
  EXPECT_TRUE(qpoch_recip(num("0.25"), q, -3).is_zero());
}

TEST(QPoch, PositiveIndexZero) {
  QBase q = half_q();
  HValue a = q.pow(-2);
  EXPECT_TRUE(qpoch_finite(a, q, 3).is_zero());
  EXPECT_FALSE(qpoch_finite(a, q, 2).is_zero());
  EXPECT_THROW(qpoch_recip(a, q, 3), Error);
}

TEST(QPoch, InfiniteProduct) {
  QBase q = half_q();
  EXPECT_EQ(qpoch_inf(HValue(256), q), HValue(256, 1));
  HValue v = qpoch_inf(num("0.5"), q);
  EXPECT_LT(rel_diff(v, pentagonal("0.5", 256)), 1e-70);
  EXPECT_NEAR(v.re().to_double(), 0.2887880951, 1e-10);
  HValue a5 = num("0.5") * q.pow(5);
  EXPECT_LT(rel_diff(qpoch_inf(a5, q), v / qpoch_finite(num("0.5"), q, 5)), 1e-70);
  EXPECT_GT(qpoch_inf_detail(num("0.5"), q).factors, 256);
}

TEST(QPoch, ListProduct) {
  QBase q = half_q();
  EXPECT_EQ(qpoch_list({}, q, 7), HValue(256, 1));
  std::vector<HValue> two{num("0.2"), num("0.3")};
  EXPECT_LT(rel_diff(qpoch_list(two, q, 2), qpoch_finite(two[0], q, 2) * qpoch_finite(two[1], q, 2)), 1e-70);
}

TEST(QBase, RejectsOutsideDisk) {
  EXPECT_THROW(QBase(num("1")), Error);
  EXPECT_THROW(QBase(HValue(128)), Error);
  EXPECT_THROW(QBase(num("0.8", "0.7", 128)), Error);
}

TEST(Poch, Examples) {
  EXPECT_EQ(poch_classical(num("2.5"), 0), HValue(256, 1));
  EXPECT_EQ(poch_classical(num("3"), 4).re().to_double(), 360.0);
  EXPECT_EQ(poch_classical(num("3"), -1).re().to_double(), 0.5);
  EXPECT_TRUE(poch_classical(num("-2"), 5).is_zero());
  EXPECT_THROW(poch_classical(num("2"), -3), Error);
}

TEST(LogGamma, Examples) {
  EXPECT_LT(log_gamma(num("1")).abs_double(), 1e-70);
  Real lp = pi_real(256);
  mpfr_sqrt(lp.get(), lp.get(), MPFR_RNDN);
  mpfr_log(lp.get(), lp.get(), MPFR_RNDN);
  EXPECT_LT(rel_diff(log_gamma(num("0.5")), HValue(lp, Real(256))), 1e-70);
  EXPECT_LT(rel_diff(log_gamma(num("5")), log(num("24"))), 1e-70);
}

TEST(LogGamma, AgreesWithMpfrOnRealAxis) {
  for (const char* s : {"0.001", "0.7", "3.25", "17.5", "123.456", "1000.5"}) {
    Real ref(256);
    mpfr_lngamma(ref.get(), Real::parse(s, 256).get(), MPFR_RNDN);
    EXPECT_LT(rel_diff(log_gamma(num(s)), HValue(ref, Real(256))), 1e-70) << s;
  }
}

TEST(LogGamma, NegativeArgumentsViaReflection) {
  // Gamma(-2.5) = -8 sqrt(pi) / 15
  Real r = pi_real(256);
  mpfr_sqrt(r.get(), r.get(), MPFR_RNDN);
  mpfr_mul_si(r.get(), r.get(), -8, MPFR_RNDN);
  mpfr_div_ui(r.get(), r.get(), 15, MPFR_RNDN);
  EXPECT_LT(rel_diff(gamma(num("-2.5")), HValue(r, Real(256))), 1e-70);
  try {
    log_gamma(num("-3"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::pole_at_nonpositive_integer);
  }
}

TEST(LogGamma, ComplexModulusOnCriticalLine) {
  // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
  for (const char* y : {"0.3", "2.5", "11"}) {
    HValue z = num("0.5", y, 256);
    HValue g = gamma(z);
    Real ref = pi_real(256), c(256);
    mpfr_mul(c.get(), ref.get(), Real::parse(y, 256).get(), MPFR_RNDN);
    mpfr_cosh(c.get(), c.get(), MPFR_RNDN);
    mpfr_div(ref.get(), ref.get(), c.get(), MPFR_RNDN);
    EXPECT_LT(rel_diff(HValue(g.norm(), Real(256)), HValue(ref, Real(256))), 1e-70) << y;
  }
}

TEST(LogGamma, PrincipalBranchContinuity) {
  // Im log Gamma(x + iy) grows without 2 pi jumps along a horizontal line.
  double prev = 0.0;
  for (int k = 0; k <= 40; ++k) {
    std::string x = std::to_string(0.5 + 0.25 * k);
    double im = log_gamma(num(x.c_str(), "7", 128)).im().to_double();
    if (k > 0) {
      EXPECT_LT(std::fabs(im - prev), 1.0);
    }
    prev = im;
  }
}
