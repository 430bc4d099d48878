#pragma once

// Reference evaluations written directly from textbook formulas. They use
// only HValue arithmetic, never the library's Pochhammer or series code.

#include <cmath>
#include <vector>

#include "kmv/mparith.hpp"

namespace kmv::oracle {

inline HValue unit(Bits b) { return HValue(b, 1); }

/// (x;q)_k for k >= 0 and k < 0 from the defining products.
inline HValue qp(const HValue& x, const HValue& q, long k) {
  HValue acc = unit(x.bits());
  if (k >= 0) {
    HValue t = x;
    for (long j = 0; j < k; ++j) {
      acc *= unit(x.bits()) - t;
      t *= q;
    }
    return acc;
  }
  HValue t = x / q;
  for (long j = 1; j <= -k; ++j) {
    acc *= unit(x.bits()) - t;
    t /= q;
  }
  return unit(x.bits()) / acc;
}

/// (x;q)_inf, multiplied out until the factors equal one at working precision.
inline HValue qp_inf(const HValue& x, const HValue& q) {
  HValue acc = unit(x.bits());
  HValue t = x;
  for (int j = 0; j < 100000; ++j) {
    if (t.is_zero() || t.log2_abs() < -static_cast<double>(x.bits()) - 8) break;
    acc *= unit(x.bits()) - t;
    t *= q;
  }
  return acc;
}

/// Bilateral very-well-poised 6psi6 by direct summation over |k| <= K:
/// sum (1 - a q^{2k})/(1 - a) prod_{u in b,c,d,e} (u)_k/(aq/u)_k (a^2 q/(bcde))^k.
inline HValue bailey_sum(const HValue& a, const std::vector<HValue>& u, const HValue& q, long K) {
  const Bits bits = a.bits();
  HValue arg = a * a * q;
  for (const auto& x : u) arg /= x;
  HValue total(bits);
  for (long k = -K; k <= K; ++k) {
    HValue t = (unit(bits) - a * pow(q, 2 * k)) / (unit(bits) - a);
    for (const auto& x : u) t *= qp(x, q, k) / qp(a * q / x, q, k);
    t *= pow(arg, k);
    total += t;
  }
  return total;
}

/// Closed form of the same sum.
inline HValue bailey_closed(const HValue& a, const std::vector<HValue>& u, const HValue& q) {
  const Bits bits = a.bits();
  HValue num = qp_inf(a * q, q) * qp_inf(q, q) * qp_inf(q / a, q);
  HValue den = unit(bits);
  HValue produ = unit(bits);
  for (size_t i = 0; i < u.size(); ++i) {
    produ *= u[i];
    den *= qp_inf(a * q / u[i], q) * qp_inf(q / u[i], q);
    for (size_t j = i + 1; j < u.size(); ++j) num *= qp_inf(a * q / (u[i] * u[j]), q);
  }
  den *= qp_inf(a * a * q / produ, q);
  return num / den;
}

/// Terminating 3phi2(q^-N, A, B; C, q^{1-N} AB/C; q, q) by direct summation.
inline HValue saalschutz_sum(const HValue& A, const HValue& B, const HValue& C, long N, const HValue& q) {
  const Bits bits = A.bits();
  HValue qN = unit(bits) / pow(q, N);
  HValue D = q * qN * A * B / C;
  HValue total(bits);
  for (long k = 0; k <= N; ++k) {
    total += qp(qN, q, k) * qp(A, q, k) * qp(B, q, k) / (qp(q, q, k) * qp(C, q, k) * qp(D, q, k)) * pow(q, k);
  }
  return total;
}

/// (C/A, C/B; q)_N / (C, C/(AB); q)_N.
inline HValue saalschutz_closed(const HValue& A, const HValue& B, const HValue& C, long N, const HValue& q) {
  return qp(C / A, q, N) * qp(C / B, q, N) / (qp(C, q, N) * qp(C / (A * B), q, N));
}

/// Rising factorial from its product.
inline HValue rising(const HValue& x, long k) {
  HValue acc = unit(x.bits());
  for (long j = 0; j < k; ++j) acc *= x + j;
  return acc;
}

/// 2F1(-M, b; c; 1) summed directly, and its Chu-Vandermonde value (c-b)_M/(c)_M.
inline HValue gauss_terminating_sum(long M, const HValue& b, const HValue& c) {
  const Bits bits = b.bits();
  HValue total(bits);
  HValue mM(bits, -M);
  for (long k = 0; k <= M; ++k) {
    total += rising(mM, k) * rising(b, k) / (rising(c, k) * rising(HValue(bits, 1), k));
  }
  return total;
}
inline HValue chu_vandermonde(long M, const HValue& b, const HValue& c) { return rising(c - b, M) / rising(c, M); }

}  // namespace kmv::oracle
