#pragma once

// Arbitrary-precision complex scalars and the scalar kernels every identity
// is built from: q-shifted factorials for all integer indices, infinite
// q-products, rising factorials and complex log-gamma.

#include <mpfr.h>

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kmv/error.hpp"

namespace kmv {

using Bits = mpfr_prec_t;

/// Owning wrapper around one mpfr_t. A moved-from Real may only be assigned
/// to or destroyed.
class Real {
 public:
  explicit Real(Bits bits) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
  }
  Real(Bits bits, long x) {
    mpfr_init2(v_, bits);
    mpfr_set_si(v_, x, MPFR_RNDN);
  }
  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Real(Real&& o) noexcept {
    v_[0] = o.v_[0];
    o.v_[0]._mpfr_d = nullptr;
  }
  Real& operator=(const Real& o) {
    if (this == &o) return *this;
    if (v_[0]._mpfr_d == nullptr) {
      mpfr_init2(v_, mpfr_get_prec(o.v_));
    } else if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
    }
    mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    std::swap(v_[0], o.v_[0]);
    return *this;
  }
  ~Real() {
    if (v_[0]._mpfr_d != nullptr) mpfr_clear(v_);
  }

  /// Parses a decimal string directly at the requested precision.
  static Real parse(std::string_view text, Bits bits) {
    Real r(bits);
    std::string s(text);
    if (s.empty() || mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0) {
      // mpfr_set_str returns nonzero when the whole string was not consumed
      throw Error(ErrorCode::parse_error, "not a decimal number: '" + s + "'");
    }
    return r;
  }

  Bits bits() const { return mpfr_get_prec(v_); }
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  /// Binary exponent e with 2^(e-1) <= |x| < 2^e; LONG_MIN for zero.
  long exponent() const {
    if (mpfr_zero_p(v_)) return LONG_MIN;
    return static_cast<long>(mpfr_get_exp(v_));
  }

  /// log2|x| without underflow; -inf for zero.
  double log2_abs() const {
    if (mpfr_zero_p(v_)) return -INFINITY;
    long e = 0;
    double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return std::log2(std::fabs(m)) + static_cast<double>(e);
  }

  /// Shortest decimal form that reads back to the identical binary value.
  std::string to_string() const {
    if (mpfr_nan_p(v_)) return "nan";
    if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
    if (mpfr_zero_p(v_)) return "0";
    size_t digits = mpfr_get_str_ndigits(10, bits());
    mpfr_exp_t e10 = 0;
    char* raw = mpfr_get_str(nullptr, &e10, 10, digits, v_, MPFR_RNDN);
    std::string mant(raw);
    mpfr_free_str(raw);
    std::string out;
    if (mant.front() == '-') {
      out.push_back('-');
      mant.erase(0, 1);
    }
    while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
    out.push_back(mant[0]);
    if (mant.size() > 1) {
      out.push_back('.');
      out.append(mant, 1, std::string::npos);
    }
    long exp10 = static_cast<long>(e10) - 1;
    if (exp10 != 0) out += "e" + std::to_string(exp10);
    return out;
  }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

/// Working precision for one verification run.
struct PrecisionContext {
  Bits bits = 256;
  int guard_digits = 16;

  PrecisionContext() = default;
  explicit PrecisionContext(Bits b, int guard = 16) : bits(b), guard_digits(guard) {
    if (b < 64) throw Error(ErrorCode::invalid_argument, "precision must be at least 64 bits");
    if (guard < 0) throw Error(ErrorCode::invalid_argument, "guard digits must be non-negative");
  }

  /// Unit roundoff 2^(1-bits), exact.
  Real eps() const {
    Real r(bits, 1);
    mpfr_mul_2si(r.get(), r.get(), 1 - static_cast<long>(bits), MPFR_RNDN);
    return r;
  }

  /// bits = ceil(-2 log2 tol) + 64.
  static PrecisionContext for_tolerance(double tol) {
    if (!(tol > 0.0) || tol >= 1.0) throw Error(ErrorCode::invalid_argument, "tolerance must lie in (0,1)");
    auto b = static_cast<Bits>(std::ceil(-2.0 * std::log2(tol))) + 64;
    return PrecisionContext(std::max<Bits>(b, 64));
  }
};

/// Complex number with real and imaginary parts at one common precision.
/// Mixing precisions in arithmetic throws instead of silently rounding.
class HValue {
 public:
  explicit HValue(Bits bits) : re_(bits), im_(bits) {}
  HValue(Bits bits, long re, long im = 0) : re_(bits, re), im_(bits, im) {}
  HValue(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {
    if (re_.bits() != im_.bits()) throw Error(ErrorCode::precision_mismatch, "real and imaginary parts differ");
  }

  static HValue parse(std::string_view re, std::string_view im, Bits bits) {
    return HValue(Real::parse(re, bits), Real::parse(im, bits));
  }
  static HValue parse(std::string_view re, Bits bits) { return HValue(Real::parse(re, bits), Real(bits)); }

  Bits bits() const { return re_.bits(); }
  const Real& re() const { return re_; }
  const Real& im() const { return im_; }
  Real& re() { return re_; }
  Real& im() { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }
  bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

  /// Largest binary exponent of the two parts; LONG_MIN for zero.
  long exponent() const { return std::max(re_.exponent(), im_.exponent()); }

  Real norm() const {
    Real r(bits());
    mpfr_fmma(r.get(), re_.get(), re_.get(), im_.get(), im_.get(), MPFR_RNDN);
    return r;
  }
  Real abs() const {
    Real r(bits());
    mpfr_hypot(r.get(), re_.get(), im_.get(), MPFR_RNDN);
    return r;
  }
  double abs_double() const { return abs().to_double(); }
  double log2_abs() const {
    if (is_zero()) return -INFINITY;
    return abs().log2_abs();
  }

  HValue& operator+=(const HValue& o) {
    check(o);
    mpfr_add(re_.get(), re_.get(), o.re_.get(), MPFR_RNDN);
    mpfr_add(im_.get(), im_.get(), o.im_.get(), MPFR_RNDN);
    return *this;
  }
  HValue& operator-=(const HValue& o) {
    check(o);
    mpfr_sub(re_.get(), re_.get(), o.re_.get(), MPFR_RNDN);
    mpfr_sub(im_.get(), im_.get(), o.im_.get(), MPFR_RNDN);
    return *this;
  }
  HValue& operator*=(const HValue& o) {
    check(o);
    if (o.im_.is_zero()) {
      mpfr_mul(re_.get(), re_.get(), o.re_.get(), MPFR_RNDN);
      mpfr_mul(im_.get(), im_.get(), o.re_.get(), MPFR_RNDN);
      return *this;
    }
    Real t(bits());
    mpfr_fmms(t.get(), re_.get(), o.re_.get(), im_.get(), o.im_.get(), MPFR_RNDN);
    mpfr_fmma(im_.get(), re_.get(), o.im_.get(), im_.get(), o.re_.get(), MPFR_RNDN);
    re_ = std::move(t);
    return *this;
  }
  HValue& operator/=(const HValue& o) {
    check(o);
    if (o.is_zero()) throw Error(ErrorCode::division_by_zero_pole, "complex division by zero");
    if (o.im_.is_zero()) {
      mpfr_div(re_.get(), re_.get(), o.re_.get(), MPFR_RNDN);
      mpfr_div(im_.get(), im_.get(), o.re_.get(), MPFR_RNDN);
      return *this;
    }
    Real den = o.norm();
    Real t(bits());
    mpfr_fmma(t.get(), re_.get(), o.re_.get(), im_.get(), o.im_.get(), MPFR_RNDN);
    mpfr_fmms(im_.get(), im_.get(), o.re_.get(), re_.get(), o.im_.get(), MPFR_RNDN);
    mpfr_div(re_.get(), t.get(), den.get(), MPFR_RNDN);
    mpfr_div(im_.get(), im_.get(), den.get(), MPFR_RNDN);
    return *this;
  }
  HValue& operator*=(long k) {
    mpfr_mul_si(re_.get(), re_.get(), k, MPFR_RNDN);
    mpfr_mul_si(im_.get(), im_.get(), k, MPFR_RNDN);
    return *this;
  }
  HValue& operator+=(long k) {
    mpfr_add_si(re_.get(), re_.get(), k, MPFR_RNDN);
    return *this;
  }

  friend HValue operator+(HValue a, const HValue& b) { return a += b; }
  friend HValue operator-(HValue a, const HValue& b) { return a -= b; }
  friend HValue operator*(HValue a, const HValue& b) { return a *= b; }
  friend HValue operator/(HValue a, const HValue& b) { return a /= b; }
  friend HValue operator+(HValue a, long k) { return a += k; }
  friend HValue operator-(HValue a, long k) { return a += -k; }
  friend HValue operator*(HValue a, long k) { return a *= k; }
  friend HValue operator-(HValue a) {
    mpfr_neg(a.re_.get(), a.re_.get(), MPFR_RNDN);
    mpfr_neg(a.im_.get(), a.im_.get(), MPFR_RNDN);
    return a;
  }

  /// 1 - this, the basic q-Pochhammer factor.
  HValue one_minus() const {
    HValue r(bits());
    mpfr_si_sub(r.re_.get(), 1, re_.get(), MPFR_RNDN);
    mpfr_neg(r.im_.get(), im_.get(), MPFR_RNDN);
    return r;
  }

  HValue reciprocal() const { return HValue(bits(), 1) / *this; }

  /// Bitwise equality of both parts.
  friend bool operator==(const HValue& a, const HValue& b) { return a.re_ == b.re_ && a.im_ == b.im_; }

 private:
  void check(const HValue& o) const {
    if (o.bits() != bits()) {
      throw Error(ErrorCode::precision_mismatch,
                  std::to_string(bits()) + "-bit value combined with " + std::to_string(o.bits()) + "-bit value");
    }
  }

  Real re_;
  Real im_;
};

inline Real pi_real(Bits bits) {
  Real r(bits);
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

inline HValue exp(const HValue& z) {
  Bits b = z.bits();
  Real m(b), s(b), c(b);
  mpfr_exp(m.get(), z.re().get(), MPFR_RNDN);
  mpfr_sin_cos(s.get(), c.get(), z.im().get(), MPFR_RNDN);
  mpfr_mul(c.get(), c.get(), m.get(), MPFR_RNDN);
  mpfr_mul(s.get(), s.get(), m.get(), MPFR_RNDN);
  return HValue(std::move(c), std::move(s));
}

/// Principal logarithm, imaginary part in (-pi, pi].
inline HValue log(const HValue& z) {
  if (z.is_zero()) throw Error(ErrorCode::division_by_zero_pole, "logarithm of zero");
  Bits b = z.bits();
  Real r = z.abs();
  mpfr_log(r.get(), r.get(), MPFR_RNDN);
  Real a(b);
  mpfr_atan2(a.get(), z.im().get(), z.re().get(), MPFR_RNDN);
  return HValue(std::move(r), std::move(a));
}

inline HValue sin(const HValue& z) {
  Bits b = z.bits();
  Real s(b), c(b), sh(b), ch(b);
  mpfr_sin_cos(s.get(), c.get(), z.re().get(), MPFR_RNDN);
  mpfr_sinh_cosh(sh.get(), ch.get(), z.im().get(), MPFR_RNDN);
  mpfr_mul(s.get(), s.get(), ch.get(), MPFR_RNDN);
  mpfr_mul(c.get(), c.get(), sh.get(), MPFR_RNDN);
  return HValue(std::move(s), std::move(c));
}

/// Principal k-th root, exp(log(z)/k).
inline HValue root(const HValue& z, long k) {
  if (z.is_zero()) return z;
  HValue l = log(z);
  mpfr_div_si(l.re().get(), l.re().get(), k, MPFR_RNDN);
  mpfr_div_si(l.im().get(), l.im().get(), k, MPFR_RNDN);
  return exp(l);
}

/// z^k for integer k by repeated squaring.
inline HValue pow(const HValue& z, long k) {
  Bits b = z.bits();
  if (k == 0) return HValue(b, 1);
  unsigned long e = k < 0 ? static_cast<unsigned long>(-(k + 1)) + 1UL : static_cast<unsigned long>(k);
  HValue base = z;
  HValue acc(b, 1);
  while (e != 0) {
    if (e & 1UL) acc *= base;
    e >>= 1;
    if (e != 0) base *= base;
  }
  return k < 0 ? acc.reciprocal() : acc;
}

/// Polar construction r*(cos t + i sin t) with r and t given as decimals.
inline HValue from_polar(std::string_view modulus, std::string_view phase, Bits bits) {
  Real r = Real::parse(modulus, bits);
  Real t = Real::parse(phase, bits);
  Real s(bits), c(bits);
  mpfr_sin_cos(s.get(), c.get(), t.get(), MPFR_RNDN);
  mpfr_mul(c.get(), c.get(), r.get(), MPFR_RNDN);
  mpfr_mul(s.get(), s.get(), r.get(), MPFR_RNDN);
  return HValue(std::move(c), std::move(s));
}

/// True when |value| is indistinguishable from zero relative to 2^scale_exp
/// at this precision. Used to recognise factors such as 1 - q^j q^{-j}
/// that vanish exactly in exact arithmetic but pick up rounding noise.
/// With judge_bits set the test is made at that precision instead.
inline bool negligible(const HValue& value, long scale_exp, Bits judge_bits = 0) {
  if (value.is_zero()) return true;
  long slack = static_cast<long>(judge_bits ? judge_bits : value.bits()) - 20;
  return value.exponent() < std::max(scale_exp, 1L) - slack;
}

/// A value with explicit counts of exactly vanishing factors in the
/// numerator (zeros) and denominator (poles); value holds the product of
/// the remaining finite factors.
struct Tracked {
  HValue value;
  int zeros = 0;
  int poles = 0;

  explicit Tracked(HValue v, int z = 0, int p = 0) : value(std::move(v)), zeros(z), poles(p) {}

  int order() const { return zeros - poles; }

  Tracked& operator*=(const Tracked& o) {
    value *= o.value;
    zeros += o.zeros;
    poles += o.poles;
    return *this;
  }
  Tracked& operator*=(const HValue& v) {
    value *= v;
    return *this;
  }
  Tracked& operator/=(const Tracked& o) {
    value /= o.value;
    zeros += o.poles;
    poles += o.zeros;
    return *this;
  }
  Tracked inverse() const { return Tracked(value.reciprocal(), poles, zeros); }

  /// Zero when zeros outnumber poles; an error when any pole is not
  /// strictly outweighed.
  HValue resolve(std::string_view what = "value") const {
    if (poles > 0 && zeros <= poles) {
      throw Error(ErrorCode::division_by_zero_pole, std::string(what) + " has a pole");
    }
    if (zeros > 0) return HValue(value.bits());
    return value;
  }
};

/// Multiply (sign > 0) or divide a running product by one factor, snapping
/// numerically vanishing factors to exact zeros or poles.
inline void absorb_factor(Tracked& acc, const HValue& factor, long scale_exp, int sign, Bits judge_bits = 0) {
  if (negligible(factor, scale_exp, judge_bits)) {
    (sign > 0 ? acc.zeros : acc.poles) += 1;
  } else if (sign > 0) {
    acc.value *= factor;
  } else {
    acc.value /= factor;
  }
}

/// The base q of a q-series, with 0 < |q| < 1.
class QBase {
 public:
  explicit QBase(HValue q) : q_(std::move(q)), qinv_(q_.bits()) {
    if (q_.is_zero()) throw Error(ErrorCode::invalid_argument, "q must be nonzero");
    Real one(q_.bits(), 1);
    if (!(q_.abs() < one)) throw Error(ErrorCode::invalid_argument, "|q| must be < 1");
    qinv_ = q_.reciprocal();
  }

  const HValue& value() const { return q_; }
  const HValue& inverse() const { return qinv_; }
  Bits bits() const { return q_.bits(); }
  HValue pow(long k) const { return k >= 0 ? kmv::pow(q_, k) : kmv::pow(qinv_, -k); }

 private:
  HValue q_;
  HValue qinv_;
};

/// Extra bits carried by products and log Gamma before the final rounding.
inline constexpr Bits kGuardBits = 32;

/// z rounded (or widened) to b bits.
inline HValue with_bits(const HValue& z, Bits b) {
  Real re(b), im(b);
  mpfr_set(re.get(), z.re().get(), MPFR_RNDN);
  mpfr_set(im.get(), z.im().get(), MPFR_RNDN);
  return HValue(std::move(re), std::move(im));
}

inline Tracked with_bits(const Tracked& t, Bits b) { return Tracked(with_bits(t.value, b), t.zeros, t.poles); }

/// (a;q)_k for any integer k with vanishing factors tracked. Products run
/// with guard bits; vanishing is judged at the working precision.
inline Tracked qpoch_tracked(const HValue& a, const QBase& q, long k) {
  const Bits b = a.bits(), wp = b + kGuardBits;
  const HValue qw = with_bits(q.value(), wp);
  Tracked acc(HValue(wp, 1));
  HValue x = with_bits(a, wp);
  if (k >= 0) {
    for (long j = 0; j < k; ++j) {
      absorb_factor(acc, x.one_minus(), x.exponent(), +1, b);
      x *= qw;
    }
    return with_bits(acc, b);
  }
  for (long j = 1; j <= -k; ++j) {
    x /= qw;
    absorb_factor(acc, x.one_minus(), x.exponent(), +1, b);
  }
  return with_bits(acc.inverse(), b);
}

/// (a;q)_k. For k >= 0 the product of (1 - a q^j), j < k; for k < 0 the
/// reciprocal of the product of (1 - a q^j), k <= j <= -1.
inline HValue qpoch_finite(const HValue& a, const QBase& q, long k) {
  return qpoch_tracked(a, q, k).resolve("(a;q)_k");
}

/// 1/(a;q)_k computed without dividing by a vanishing product; zero when a
/// negative-index factor vanishes.
inline HValue qpoch_recip(const HValue& a, const QBase& q, long k) {
  return qpoch_tracked(a, q, k).inverse().resolve("1/(a;q)_k");
}

inline HValue qpoch_list(std::span<const HValue> as, const QBase& q, long k) {
  HValue acc(q.bits(), 1);
  for (const auto& a : as) acc *= qpoch_finite(a, q, k);
  return acc;
}

struct QInfResult {
  Tracked product;
  long factors = 0;
  /// Bound on the relative change from the omitted factors.
  double tail_bound = 0.0;
};

/// Infinite product truncated at the first j with |a q^j| < 2^-(bits+guard);
/// the omitted factors change the result by a relative amount below
/// |a q^J| / (1 - |q|) (to first order).
inline QInfResult qpoch_inf_detail(const HValue& a, const QBase& q, int guard_digits = 16) {
  Bits b = a.bits();
  const long cutoff = -static_cast<long>(b) - guard_digits;
  const long max_factors = 1L << 24;
  Tracked acc(HValue(b, 1));
  HValue x = a;
  long j = 0;
  for (; j < max_factors; ++j) {
    if (x.is_zero() || x.exponent() < cutoff) break;
    absorb_factor(acc, x.one_minus(), x.exponent(), +1);
    x *= q.value();
  }
  if (j == max_factors) throw Error(ErrorCode::budget_exceeded, "infinite product did not settle");
  double qa = q.value().abs_double();
  double tail = x.is_zero() ? 0.0 : std::exp2(x.log2_abs()) / (1.0 - qa) * 1.01;
  return QInfResult{std::move(acc), j, tail};
}

inline Tracked qpoch_inf_tracked(const HValue& a, const QBase& q) { return qpoch_inf_detail(a, q).product; }
inline HValue qpoch_inf(const HValue& a, const QBase& q) { return qpoch_inf_tracked(a, q).resolve(); }

/// Classical rising factorial (a)_k = Gamma(a+k)/Gamma(a) with tracked zeros.
inline Tracked poch_tracked(const HValue& a, long k) {
  const Bits b = a.bits(), wp = b + kGuardBits;
  const HValue aw = with_bits(a, wp);
  Tracked acc(HValue(wp, 1));
  if (k >= 0) {
    for (long j = 0; j < k; ++j) {
      HValue f = aw + j;
      absorb_factor(acc, f, std::max(a.exponent(), 1L + static_cast<long>(std::log2(j + 1.0))), +1, b);
    }
    return with_bits(acc, b);
  }
  for (long j = 1; j <= -k; ++j) {
    HValue f = aw - j;
    absorb_factor(acc, f, std::max(a.exponent(), 1L + static_cast<long>(std::log2(j + 1.0))), +1, b);
  }
  return with_bits(acc.inverse(), b);
}

inline HValue poch_classical(const HValue& a, long k) { return poch_tracked(a, k).resolve("(a)_k"); }
inline HValue poch_recip(const HValue& a, long k) { return poch_tracked(a, k).inverse().resolve("1/(a)_k"); }

namespace detail {

/// Nearest integer to a real HValue if it is one up to rounding noise.
inline bool near_integer(const HValue& z, long* out) {
  if (!negligible(HValue(z.im(), Real(z.bits())), z.exponent())) return false;
  double d = z.re().to_double();
  if (std::fabs(d) > 1e15) return false;
  long n = std::lround(d);
  HValue diff = z - n;
  if (!negligible(diff, std::max(z.exponent(), 1L))) return false;
  *out = n;
  return true;
}

/// Stirling coefficients B_{2k} / (2k (2k-1)), generated from zeta values and
/// cached per precision.
inline const std::vector<Real>& stirling_coefficients(Bits bits, size_t count) {
  static std::mutex mu;
  static std::map<Bits, std::vector<Real>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& v = cache[bits];
  Bits wp = bits + 32;
  while (v.size() < count) {
    unsigned long k = v.size() + 1;
    unsigned long two_k = 2 * k;
    // |B_2k| = 2 (2k)! zeta(2k) / (2 pi)^(2k)
    Real z(wp), f(wp), tp(wp);
    mpfr_zeta_ui(z.get(), two_k, MPFR_RNDN);
    mpfr_fac_ui(f.get(), two_k, MPFR_RNDN);
    mpfr_const_pi(tp.get(), MPFR_RNDN);
    mpfr_mul_2ui(tp.get(), tp.get(), 1, MPFR_RNDN);
    mpfr_pow_ui(tp.get(), tp.get(), two_k, MPFR_RNDN);
    mpfr_mul(z.get(), z.get(), f.get(), MPFR_RNDN);
    mpfr_mul_2ui(z.get(), z.get(), 1, MPFR_RNDN);
    mpfr_div(z.get(), z.get(), tp.get(), MPFR_RNDN);
    if (k % 2 == 0) mpfr_neg(z.get(), z.get(), MPFR_RNDN);
    mpfr_div_ui(z.get(), z.get(), two_k * (two_k - 1), MPFR_RNDN);
    Real c(bits);
    mpfr_set(c.get(), z.get(), MPFR_RNDN);
    v.push_back(std::move(c));
  }
  return v;
}

/// Stirling series for log Gamma(w), valid for |w| large and Re w > 0.
inline HValue log_gamma_asymptotic(const HValue& w) {
  Bits b = w.bits();
  HValue half(b, 0);
  mpfr_set_d(half.re().get(), 0.5, MPFR_RNDN);
  HValue result = (w - half) * log(w) - w;
  Real l2pi = pi_real(b);
  mpfr_mul_2ui(l2pi.get(), l2pi.get(), 1, MPFR_RNDN);
  mpfr_log(l2pi.get(), l2pi.get(), MPFR_RNDN);
  mpfr_div_2ui(l2pi.get(), l2pi.get(), 1, MPFR_RNDN);
  result += HValue(std::move(l2pi), Real(b));

  HValue winv = w.reciprocal();
  HValue winv2 = winv * winv;
  HValue wpow = winv;
  const long stop = -static_cast<long>(b) - 8 + std::max(result.exponent(), 0L);
  const size_t max_terms = static_cast<size_t>(b) + 64;
  for (size_t k = 1; k <= max_terms; ++k) {
    const auto& coeffs = stirling_coefficients(b, k);
    HValue term = wpow;
    mpfr_mul(term.re().get(), term.re().get(), coeffs[k - 1].get(), MPFR_RNDN);
    mpfr_mul(term.im().get(), term.im().get(), coeffs[k - 1].get(), MPFR_RNDN);
    result += term;
    if (term.exponent() < stop) return result;
    wpow *= winv2;
  }
  throw Error(ErrorCode::budget_exceeded, "Stirling series did not converge");
}

}  // namespace detail

namespace detail {

inline HValue log_gamma_wp(const HValue& z) {
  Bits b = z.bits();
  Real half(b);
  mpfr_set_d(half.get(), 0.5, MPFR_RNDN);
  if (z.re() < half) {
    // log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z)
    Real p = pi_real(b);
    HValue pz = z * HValue(p, Real(b));
    HValue s = sin(pz);
    mpfr_log(p.get(), p.get(), MPFR_RNDN);
    HValue one_minus_z = HValue(b, 1) - z;
    return HValue(std::move(p), Real(b)) - log(s) - log_gamma_wp(one_minus_z);
  }
  const double lift = 0.2 * static_cast<double>(b) + 10.0;
  double re = z.re().to_double();
  double im = z.im().to_double();
  long shift = 0;
  if (std::hypot(re, im) < lift) shift = static_cast<long>(std::ceil(lift - re));
  if (shift <= 0) return detail::log_gamma_asymptotic(z);

  // log Gamma(z) = log Gamma(z + K) - sum log(z + j); the product is taken
  // once and its argument corrected by the sum of the individual arguments.
  HValue prod(b, 1);
  double arg_sum = 0.0;
  for (long j = 0; j < shift; ++j) {
    prod *= z + j;
    arg_sum += std::atan2(im, re + static_cast<double>(j));
  }
  HValue lp = log(prod);
  double arg = lp.im().to_double();
  double turns = std::nearbyint((arg_sum - arg) / (2.0 * M_PI));
  if (turns != 0.0) {
    Real tp = pi_real(b);
    mpfr_mul_d(tp.get(), tp.get(), 2.0 * turns, MPFR_RNDN);
    mpfr_add(lp.im().get(), lp.im().get(), tp.get(), MPFR_RNDN);
  }
  return detail::log_gamma_asymptotic(z + shift) - lp;
}

}  // namespace detail

/// log Gamma(z). For Re z >= 1/2 this is the principal branch (real on the
/// positive axis); for Re z < 1/2 it is obtained by reflection and is a
/// logarithm of Gamma(z) whose exponential is exact.
inline HValue log_gamma(const HValue& z) {
  long n = 0;
  if (detail::near_integer(z, &n) && n <= 0) {
    throw Error(ErrorCode::pole_at_nonpositive_integer, "Gamma has a pole at " + std::to_string(n));
  }
  return with_bits(detail::log_gamma_wp(with_bits(z, z.bits() + kGuardBits)), z.bits());
}

inline HValue gamma(const HValue& z) {
  long n = 0;
  if (detail::near_integer(z, &n) && n <= 0) {
    throw Error(ErrorCode::pole_at_nonpositive_integer, "Gamma has a pole at " + std::to_string(n));
  }
  return with_bits(exp(detail::log_gamma_wp(with_bits(z, z.bits() + kGuardBits))), z.bits());
}

}  // namespace kmv
