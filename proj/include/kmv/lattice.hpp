#pragma once

// Summation engines over integer index sets: finite boxes, boxes cut by a
// hyperplane, simplices, and the infinite hyperplane / orthant / full
// lattice, the latter three accumulated shell by shell.

#include <algorithm>
#include <climits>
#include <cmath>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "kmv/error.hpp"
#include "kmv/mparith.hpp"

namespace kmv {

using MultiIndex = std::vector<long>;

/// Stand-in for an absent index bound.
inline constexpr long kUnbounded = LONG_MAX / 8;

struct TruncationPolicy {
  long radius = 24;
  /// Shell maxima below term_tol * |partial sum| count as negligible.
  double term_tol = 1e-30;
  int stagnation_window = 2;
  long max_terms = 20'000'000;
  /// Stop before the radius once the last stagnation_window shells are
  /// negligible.
  bool early_stop = true;

  void validate() const {
    if (radius < 1) throw Error(ErrorCode::invalid_argument, "radius must be >= 1");
    if (!(term_tol > 0.0)) throw Error(ErrorCode::invalid_argument, "term_tol must be > 0");
    if (stagnation_window < 1) throw Error(ErrorCode::invalid_argument, "stagnation_window must be >= 1");
    if (max_terms < 1) throw Error(ErrorCode::invalid_argument, "max_terms must be >= 1");
  }
};

struct SumDiagnostics {
  long terms_evaluated = 0;
  long nonzero_terms = 0;
  /// Largest |term| on the outermost shell that was summed.
  double largest_shell_tail = 0.0;
  bool converged = false;
  long pole_hits = 0;
  long shells = 0;
  /// The index set was finite (after vanishing factors) and summed exactly.
  bool terminating = false;
};

struct SumResult {
  HValue value;
  SumDiagnostics diag;
};

/// Known range of each coordinate and of |y| outside of which every term
/// vanishes identically.
struct IndexBounds {
  std::vector<long> lo, hi;
  long total_lo = -kUnbounded;
  long total_hi = kUnbounded;

  static IndexBounds unbounded(size_t n) {
    return IndexBounds{std::vector<long>(n, -kUnbounded), std::vector<long>(n, kUnbounded)};
  }
  size_t dim() const { return lo.size(); }
  bool coordinates_finite() const {
    for (size_t i = 0; i < lo.size(); ++i) {
      if (lo[i] <= -kUnbounded || hi[i] >= kUnbounded) return false;
    }
    return true;
  }
  /// Largest |y_i| a point inside the bounds can have.
  long max_norm() const {
    long s = 0;
    for (size_t i = 0; i < lo.size(); ++i) s = std::max({s, std::labs(lo[i]), std::labs(hi[i])});
    return s;
  }
  bool contains_total(long t) const { return t >= total_lo && t <= total_hi; }
  bool empty() const {
    for (size_t i = 0; i < lo.size(); ++i) {
      if (lo[i] > hi[i]) return true;
    }
    return total_lo > total_hi;
  }
};

namespace detail {

inline long sat_add(long a, long b) {
  if (a <= -kUnbounded || b <= -kUnbounded) return -kUnbounded;
  if (a >= kUnbounded || b >= kUnbounded) return kUnbounded;
  return a + b;
}

/// Tighten per-coordinate bounds using the constraint |y| = N.
inline void tighten_for_hyperplane(IndexBounds& b, long N) {
  const size_t n = b.dim();
  for (int pass = 0; pass < 2; ++pass) {
    for (size_t i = 0; i < n; ++i) {
      long others_lo = 0, others_hi = 0;
      for (size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        others_lo = sat_add(others_lo, b.lo[j]);
        others_hi = sat_add(others_hi, b.hi[j]);
      }
      if (others_hi < kUnbounded) b.lo[i] = std::max(b.lo[i], N - others_hi);
      if (others_lo > -kUnbounded) b.hi[i] = std::min(b.hi[i], N - others_lo);
    }
  }
}

/// Shell-by-shell accumulation with the convergence and divergence rules.
class ShellAccumulator {
 public:
  ShellAccumulator(Bits bits, const TruncationPolicy& policy) : sum_(bits), policy_(policy) {
    policy.validate();
  }

  void begin_shell() { shell_max_ = -INFINITY; }

  template <class Term>
  void visit(Term& term, std::span<const long> y) {
    if (++diag_.terms_evaluated > policy_.max_terms) {
      throw Error(ErrorCode::budget_exceeded, "term budget of " + std::to_string(policy_.max_terms) + " exhausted");
    }
    HValue t = term(y);
    if (t.is_zero()) return;
    ++diag_.nonzero_terms;
    shell_max_ = std::max(shell_max_, t.log2_abs());
    sum_ += t;
  }

  /// Closes a shell; true when summation may stop early.
  bool end_shell() {
    ++diag_.shells;
    maxima_.push_back(shell_max_);
    return policy_.early_stop && negligible_tail();
  }

  SumResult finish(bool complete) {
    double last = maxima_.empty() ? -INFINITY : maxima_.back();
    diag_.largest_shell_tail = complete ? 0.0 : std::exp2(last);
    diag_.terminating = complete;
    diag_.converged = complete || negligible_tail();
    if (!diag_.converged && growing()) {
      throw Error(ErrorCode::diverged, "shell maxima grow over the last " +
                                           std::to_string(policy_.stagnation_window + 1) + " shells");
    }
    return SumResult{std::move(sum_), diag_};
  }

 private:
  bool negligible_tail() const {
    const size_t w = static_cast<size_t>(policy_.stagnation_window);
    if (maxima_.size() < w || diag_.nonzero_terms == 0) return false;
    double limit = sum_.log2_abs() + std::log2(policy_.term_tol);
    for (size_t i = maxima_.size() - w; i < maxima_.size(); ++i) {
      if (maxima_[i] > limit) return false;
    }
    return true;
  }
  bool growing() const {
    const size_t w = static_cast<size_t>(policy_.stagnation_window) + 1;
    if (maxima_.size() < w) return false;
    for (size_t i = maxima_.size() - w + 1; i < maxima_.size(); ++i) {
      if (!(maxima_[i] > maxima_[i - 1])) return false;
    }
    return true;
  }

  HValue sum_;
  const TruncationPolicy& policy_;
  SumDiagnostics diag_;
  std::vector<double> maxima_;
  double shell_max_ = -INFINITY;
};

/// Calls f(y) for every y with lo_i <= y_i <= hi_i in lexicographic order
/// (last coordinate fastest).
template <class F>
void for_each_in_box(std::span<const long> lo, std::span<const long> hi, F&& f) {
  const size_t n = lo.size();
  for (size_t i = 0; i < n; ++i) {
    if (lo[i] > hi[i]) return;
  }
  MultiIndex y(lo.begin(), lo.end());
  while (true) {
    f(std::span<const long>(y));
    size_t i = n;
    while (i > 0) {
      --i;
      if (y[i] < hi[i]) {
        ++y[i];
        for (size_t j = i + 1; j < n; ++j) y[j] = lo[j];
        break;
      }
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

/// Calls f(y) for every y in the box with |y| = total, lexicographically.
template <class F>
void for_each_composition(std::span<const long> lo, std::span<const long> hi, long total, F&& f) {
  const size_t n = lo.size();
  if (n == 0) {
    if (total == 0) f(std::span<const long>());
    return;
  }
  // suffix_lo[i] / suffix_hi[i]: range of y_i + ... + y_{n-1}
  std::vector<long> suffix_lo(n + 1, 0), suffix_hi(n + 1, 0);
  for (size_t i = n; i-- > 0;) {
    suffix_lo[i] = sat_add(suffix_lo[i + 1], lo[i]);
    suffix_hi[i] = sat_add(suffix_hi[i + 1], hi[i]);
  }
  if (total < suffix_lo[0] || total > suffix_hi[0]) return;
  MultiIndex y(n, 0);
  auto rec = [&](auto&& self, size_t i, long remaining) -> void {
    if (i + 1 == n) {
      if (remaining >= lo[i] && remaining <= hi[i]) {
        y[i] = remaining;
        f(std::span<const long>(y));
      }
      return;
    }
    long from = lo[i], to = hi[i];
    if (suffix_hi[i + 1] < kUnbounded) from = std::max(from, remaining - suffix_hi[i + 1]);
    if (suffix_lo[i + 1] > -kUnbounded) to = std::min(to, remaining - suffix_lo[i + 1]);
    for (long v = from; v <= to; ++v) {
      y[i] = v;
      self(self, i + 1, remaining - v);
    }
  };
  rec(rec, 0, total);
}

}  // namespace detail

/// Exact sum over 0 <= x_i <= m_i. With no coordinates this is the single
/// term at the empty index.
template <class Term>
SumResult sum_box(Term&& term, std::span<const long> m, Bits bits) {
  std::vector<long> lo(m.size(), 0);
  TruncationPolicy policy;
  policy.max_terms = LONG_MAX;
  detail::ShellAccumulator acc(bits, policy);
  acc.begin_shell();
  detail::for_each_in_box(lo, m, [&](std::span<const long> x) { acc.visit(term, x); });
  acc.end_shell();
  return acc.finish(true);
}

/// Exact sum over 0 <= x_i <= m_i with |x| = N; empty (zero) unless
/// 0 <= N <= |m|.
template <class Term>
SumResult sum_box_hyperplane(Term&& term, std::span<const long> m, long N, Bits bits) {
  std::vector<long> lo(m.size(), 0);
  TruncationPolicy policy;
  policy.max_terms = LONG_MAX;
  detail::ShellAccumulator acc(bits, policy);
  acc.begin_shell();
  detail::for_each_composition(lo, m, N, [&](std::span<const long> x) { acc.visit(term, x); });
  acc.end_shell();
  return acc.finish(true);
}

/// Exact sum over y_i >= 0 with |y| <= N.
template <class Term>
SumResult sum_simplex(Term&& term, size_t n, long N, Bits bits) {
  std::vector<long> lo(n, 0), hi(n, std::max(N, 0L));
  TruncationPolicy policy;
  policy.max_terms = LONG_MAX;
  detail::ShellAccumulator acc(bits, policy);
  for (long d = 0; d <= N; ++d) {
    acc.begin_shell();
    detail::for_each_composition(lo, hi, d, [&](std::span<const long> y) { acc.visit(term, y); });
    acc.end_shell();
  }
  return acc.finish(true);
}

/// Sum over y in Z^n with |y| = N, by shells max_i |y_i| = s, s <= radius.
template <class Term>
SumResult sum_hyperplane_bilateral(Term&& term, size_t n, long N, const TruncationPolicy& policy, Bits bits,
                                   IndexBounds bounds = {}) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "hyperplane sum needs n >= 1");
  if (bounds.dim() == 0) bounds = IndexBounds::unbounded(n);
  if (!bounds.contains_total(N)) return SumResult{HValue(bits), SumDiagnostics{0, 0, 0.0, true, 0, 0, true}};
  detail::tighten_for_hyperplane(bounds, N);
  detail::ShellAccumulator acc(bits, policy);
  const bool finite = bounds.coordinates_finite();
  const long last = finite ? std::min(policy.radius, bounds.max_norm()) : policy.radius;
  std::vector<long> lo(n - 1), hi(n - 1);
  MultiIndex y(n);
  for (long s = 0; s <= last; ++s) {
    acc.begin_shell();
    bool ok = true;
    for (size_t i = 0; i + 1 < n; ++i) {
      lo[i] = std::max(-s, bounds.lo[i]);
      hi[i] = std::min(s, bounds.hi[i]);
      ok = ok && lo[i] <= hi[i];
    }
    const long ylo = std::max(-s, bounds.lo[n - 1]), yhi = std::min(s, bounds.hi[n - 1]);
    if (ok) {
      detail::for_each_in_box(lo, hi, [&](std::span<const long> head) {
        long rest = N;
        long norm = 0;
        for (size_t i = 0; i + 1 < n; ++i) {
          y[i] = head[i];
          rest -= head[i];
          norm = std::max(norm, std::labs(head[i]));
        }
        if (rest < ylo || rest > yhi) return;
        y[n - 1] = rest;
        if (std::max(norm, std::labs(rest)) != s) return;
        acc.visit(term, std::span<const long>(y));
      });
    }
    if (acc.end_shell() && s < last) return acc.finish(false);
  }
  return acc.finish(finite && last == bounds.max_norm());
}

/// Sum over y_i >= 0 by total-degree shells |y| = d, d <= radius.
template <class Term>
SumResult sum_orthant(Term&& term, size_t n, const TruncationPolicy& policy, Bits bits, IndexBounds bounds = {}) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "orthant sum needs n >= 1");
  if (bounds.dim() == 0) bounds = IndexBounds::unbounded(n);
  for (auto& l : bounds.lo) l = std::max(l, 0L);
  long reach = kUnbounded;
  if (bounds.coordinates_finite()) {
    reach = 0;
    for (long h : bounds.hi) reach += std::max(h, 0L);
  }
  reach = std::min(reach, bounds.total_hi);
  const long first = std::max(0L, bounds.total_lo);
  const long last = std::min(policy.radius, reach);
  detail::ShellAccumulator acc(bits, policy);
  for (long d = first; d <= last; ++d) {
    acc.begin_shell();
    detail::for_each_composition(bounds.lo, bounds.hi, d, [&](std::span<const long> y) { acc.visit(term, y); });
    if (acc.end_shell() && d < last) return acc.finish(false);
  }
  return acc.finish(reach < kUnbounded && last == reach);
}

/// Sum over all of Z^n by shells max_i |y_i| = s, s <= radius.
template <class Term>
SumResult sum_lattice_bilateral(Term&& term, size_t n, const TruncationPolicy& policy, Bits bits,
                                IndexBounds bounds = {}) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "lattice sum needs n >= 1");
  if (bounds.dim() == 0) bounds = IndexBounds::unbounded(n);
  const bool finite = bounds.coordinates_finite();
  const long last = finite ? std::min(policy.radius, bounds.max_norm()) : policy.radius;
  detail::ShellAccumulator acc(bits, policy);
  std::vector<long> lo(n), hi(n);
  for (long s = 0; s <= last; ++s) {
    acc.begin_shell();
    bool ok = true;
    for (size_t i = 0; i < n; ++i) {
      lo[i] = std::max(-s, bounds.lo[i]);
      hi[i] = std::min(s, bounds.hi[i]);
      ok = ok && lo[i] <= hi[i];
    }
    if (ok) {
      detail::for_each_in_box(lo, hi, [&](std::span<const long> y) {
        long norm = 0, total = 0;
        for (long v : y) {
          norm = std::max(norm, std::labs(v));
          total += v;
        }
        if (norm != s || !bounds.contains_total(total)) return;
        acc.visit(term, y);
      });
    }
    if (acc.end_shell() && s < last) return acc.finish(false);
  }
  return acc.finish(finite && last == bounds.max_norm());
}

/// prod_{i<j} (z_i q^{y_i} - z_j q^{y_j}) / (z_i - z_j).
inline HValue vandermonde_ratio(std::span<const HValue> z, std::span<const long> y, const QBase& q) {
  if (z.size() != y.size()) throw Error(ErrorCode::invalid_argument, "node and index dimensions differ");
  const size_t n = z.size();
  std::vector<HValue> w;
  w.reserve(n);
  for (size_t i = 0; i < n; ++i) w.push_back(z[i] * q.pow(y[i]));
  HValue num(q.bits(), 1), den(q.bits(), 1);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      HValue d = z[i] - z[j];
      if (negligible(d, std::max(z[i].exponent(), z[j].exponent()))) {
        throw Error(ErrorCode::degenerate_nodes, "nodes " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
      den *= d;
      num *= w[i] - w[j];
    }
  }
  return num / den;
}

/// prod_{i<j} (z_i + y_i - z_j - y_j) / (z_i - z_j).
inline HValue vandermonde_ratio_classical(std::span<const HValue> z, std::span<const long> y) {
  if (z.size() != y.size()) throw Error(ErrorCode::invalid_argument, "node and index dimensions differ");
  const size_t n = z.size();
  if (n == 0) throw Error(ErrorCode::invalid_argument, "empty node list");
  HValue num(z[0].bits(), 1), den(z[0].bits(), 1);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      HValue d = z[i] - z[j];
      if (negligible(d, std::max(z[i].exponent(), z[j].exponent()))) {
        throw Error(ErrorCode::degenerate_nodes, "nodes " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
      den *= d;
      num *= d + (y[i] - y[j]);
    }
  }
  return num / den;
}

}  // namespace kmv
