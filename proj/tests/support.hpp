#pragma once

#include <random>
#include <string>

#include "kmv/mparith.hpp"

namespace kmv::testing {

inline HValue num(const char* re, Bits bits = 256) { return HValue::parse(re, bits); }
inline HValue num(const char* re, const char* im, Bits bits) { return HValue::parse(re, im, bits); }

/// |a - b| / max(|a|, |b|) as a double (0 when both vanish).
inline double rel_diff(const HValue& a, const HValue& b) {
  HValue d = a - b;
  if (d.is_zero()) return 0.0;
  double scale = std::max(a.log2_abs(), b.log2_abs());
  return std::exp2(d.log2_abs() - scale);
}

inline double eps_of(Bits bits) { return std::ldexp(1.0, 1 - static_cast<int>(bits)); }

/// Random complex number with modulus in [lo, hi].
inline HValue random_complex(std::mt19937_64& rng, Bits bits, double lo, double hi) {
  std::uniform_real_distribution<double> r(lo, hi), t(-3.14159, 3.14159);
  return from_polar(std::to_string(r(rng)), std::to_string(t(rng)), bits);
}

}  // namespace kmv::testing
