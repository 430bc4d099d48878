#pragma once

// Deterministic random draws used to build parameter sets. Every drawn
// number is a short decimal string parsed at full precision, so a set is
// reproduced exactly from (seed, identity) on any machine.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "kmv/error.hpp"
#include "kmv/mparith.hpp"

namespace kmv {

struct DimRange {
  long lo = 0;
  long hi = 0;
};

struct SampleConfig {
  std::uint64_t seed = 1;
  double q_lo = 0.2, q_hi = 0.7;
  double mag_lo = 0.3, mag_hi = 2.0;
  /// achieved convergence modulus <= margin * bound
  double margin = 0.5;
  /// the modulus is aimed at [target_lo, target_hi] * bound
  double target_lo = 0.003, target_hi = 0.03;
  double pole_clearance = 1e-2;
  /// half-width (radians) of the excluded wedge around the real axis
  double phase_exclusion = 0.15;
  /// planned truncation radius; the pole scan covers radius + 2 shells
  long radius = 24;
  int max_attempts = 400;
  /// classical identities in terminating mode
  bool terminating = true;
  DimRange n{1, 3}, p{0, 3}, r{1, 3}, m{0, 3}, N{-2, 2}, L{0, 3};

  void validate() const {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::config_error, what); };
    if (!(margin > 0 && margin < 1)) bad("margin must lie in (0,1)");
    if (!(pole_clearance > 0)) bad("pole_clearance must be positive");
    if (!(0 < q_lo && q_lo <= q_hi && q_hi < 1)) bad("q modulus range must lie in (0,1)");
    if (!(0 < mag_lo && mag_lo <= mag_hi)) bad("magnitude band must be positive and ordered");
    if (!(0 < target_lo && target_lo <= target_hi && target_hi <= margin)) {
      bad("target band must be positive, ordered and below the margin");
    }
    if (radius < 1) bad("radius must be >= 1");
    if (max_attempts < 1) bad("max_attempts must be >= 1");
    for (const auto* d : {&n, &p, &r, &m, &N, &L}) {
      if (d->lo > d->hi) bad("dimension range is empty");
    }
    if (n.lo < 1 || r.lo < 0 || p.lo < 0 || m.lo < 0 || L.lo < 0) bad("dimension range below its minimum");
  }
};

/// FNV-1a, used to give every identity its own stream.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

/// One stream of draws. Overrides pin dimensions (n, p, N, ...) or switch
/// on named degenerate cases (m_zero, m_some_zero, d_eq_bq, ...).
class Draw {
 public:
  Draw(const SampleConfig& cfg, std::uint64_t stream, Bits bits, std::map<std::string, long> overrides = {})
      : cfg_(cfg), rng_(cfg.seed ^ stream), bits_(bits), overrides_(std::move(overrides)) {}

  const SampleConfig& cfg() const { return cfg_; }
  Bits bits() const { return bits_; }

  /// Uniform in [0,1) from the top 53 bits (independent of the standard
  /// library's distribution implementations).
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  long integer(long lo, long hi) {
    if (hi <= lo) return lo;
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(rng_() % span);
  }

  bool has(const std::string& key) const { return overrides_.count(key) != 0; }
  long fixed(const std::string& key, long fallback) const {
    auto it = overrides_.find(key);
    return it == overrides_.end() ? fallback : it->second;
  }

  /// A dimension or integer parameter: override, else uniform in the
  /// configured range intersected with [lo, hi].
  long dim(const std::string& key, const DimRange& range, long lo, long hi) {
    if (has(key)) return fixed(key, 0);
    long a = std::max(range.lo, lo), b = std::min(range.hi, hi);
    if (a > b) a = b = std::max(lo, std::min(hi, range.lo));
    return integer(a, b);
  }

  /// Non-negative integer vector honoring the m_zero / m_some_zero cases.
  std::vector<long> mvec(size_t len, long lo = 0) {
    std::vector<long> m(len);
    for (auto& v : m) v = integer(std::max(lo, cfg_.m.lo), std::max(lo, cfg_.m.hi));
    if (has("m_zero")) std::fill(m.begin(), m.end(), 0);
    if (has("m_some_zero") && !m.empty()) {
      m.front() = 0;
      if (m.size() > 1 && m.back() == 0) m.back() = 1;
    }
    return m;
  }

  static std::string decimal(long micro) {
    char buf[48];
    long a = micro < 0 ? -micro : micro;
    std::snprintf(buf, sizeof buf, "%s%ld.%06ld", micro < 0 ? "-" : "", a / 1000000, a % 1000000);
    return buf;
  }

  /// Six-decimal real in [lo, hi].
  HValue real(double lo, double hi) {
    long a = std::lround(std::ceil(lo * 1e6)), b = std::lround(std::floor(hi * 1e6));
    return HValue::parse(decimal(integer(a, b)), bits_);
  }

  /// r e^{i phi} with r in [lo, hi] and phi away from the real axis.
  HValue complex(double lo, double hi) {
    long a = std::lround(std::ceil(lo * 1e6)), b = std::lround(std::floor(hi * 1e6));
    std::string r = decimal(integer(a, b));
    const double limit = std::sin(cfg_.phase_exclusion);
    for (;;) {
      long t = integer(-3141592, 3141592);
      if (std::fabs(std::sin(static_cast<double>(t) * 1e-6)) >= limit) {
        return from_polar(r, decimal(t), bits_);
      }
    }
  }

  HValue free() { return complex(cfg_.mag_lo, cfg_.mag_hi); }
  std::vector<HValue> free(size_t len) {
    std::vector<HValue> v;
    for (size_t i = 0; i < len; ++i) v.push_back(free());
    return v;
  }
  HValue base() { return complex(cfg_.q_lo, cfg_.q_hi); }
  /// Complex value with modulus in the target band times bound.
  HValue target(double bound = 1.0) { return complex(cfg_.target_lo * bound, cfg_.target_hi * bound); }

  /// Real positive classical parameter, kept off the integers.
  HValue classical(double lo, double hi) {
    for (;;) {
      HValue v = real(lo, hi);
      double x = v.re().to_double();
      if (std::fabs(x - std::nearbyint(x)) >= 4 * cfg_.pole_clearance) return v;
    }
  }

 private:
  const SampleConfig& cfg_;
  std::mt19937_64 rng_;
  Bits bits_;
  std::map<std::string, long> overrides_;
};

}  // namespace kmv
