#pragma once

// Declarative description of one side of an identity: a closed-form
// prefactor times (optionally) a lattice sum whose summand is a product of
// Pochhammer symbols, powers, well-poised factors and a Vandermonde ratio,
// each indexed by an affine function of the summation index.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kmv/error.hpp"
#include "kmv/lattice.hpp"
#include "kmv/mparith.hpp"

namespace kmv {

enum class Mode { q, classical };

/// Integer affine form c0 + sum_i coef_i y_i.
struct Affine {
  long c0 = 0;
  std::vector<long> coef;

  static Affine coord(size_t n, size_t k) {
    Affine a{0, std::vector<long>(n, 0)};
    a.coef.at(k) = 1;
    return a;
  }
  static Affine total(size_t n) { return Affine{0, std::vector<long>(n, 1)}; }
  /// y_1 + ... + y_i (first i coordinates).
  static Affine prefix(size_t n, size_t i) {
    Affine a{0, std::vector<long>(n, 0)};
    for (size_t k = 0; k < i && k < n; ++k) a.coef[k] = 1;
    return a;
  }
  static Affine constant(size_t n, long c) { return Affine{c, std::vector<long>(n, 0)}; }

  long operator()(std::span<const long> y) const {
    long v = c0;
    for (size_t i = 0; i < coef.size(); ++i) v += coef[i] * y[i];
    return v;
  }
  friend Affine operator+(Affine a, const Affine& b) {
    for (size_t i = 0; i < a.coef.size(); ++i) a.coef[i] += b.coef.at(i);
    a.c0 += b.c0;
    return a;
  }
  friend Affine operator+(Affine a, long c) {
    a.c0 += c;
    return a;
  }
  friend Affine operator*(long s, Affine a) {
    for (auto& c : a.coef) c *= s;
    a.c0 *= s;
    return a;
  }
  friend Affine operator-(Affine a) { return -1 * std::move(a); }
  friend Affine operator-(Affine a, const Affine& b) { return std::move(a) + (-1 * b); }

  /// Index of the single coordinate with coefficient +1, or -1.
  long single_coordinate() const {
    long found = -1;
    for (size_t i = 0; i < coef.size(); ++i) {
      if (coef[i] == 0) continue;
      if (coef[i] != 1 || found >= 0) return -1;
      found = static_cast<long>(i);
    }
    return found;
  }
  bool is_total() const {
    return !coef.empty() && std::all_of(coef.begin(), coef.end(), [](long c) { return c == 1; });
  }
  /// Range over the box lo <= y <= hi (finite bounds assumed).
  std::pair<long, long> range(std::span<const long> lo, std::span<const long> hi) const {
    long a = c0, b = c0;
    for (size_t i = 0; i < coef.size(); ++i) {
      long u = coef[i] * lo[i], v = coef[i] * hi[i];
      a += std::min(u, v);
      b += std::max(u, v);
    }
    return {a, b};
  }
};

enum class FactorKind { symbol, power, gauss, well_poised, vandermonde };

struct Factor {
  FactorKind kind;
  /// +1 numerator, -1 denominator (symbols only).
  int sign;
  HValue base;
  Affine arg;
  std::vector<HValue> nodes;
};

/// Summand of a lattice sum, as a product of indexed factors.
class TermSpec {
 public:
  TermSpec(size_t dim, Mode mode, std::optional<QBase> q, Bits bits)
      : dim_(dim), mode_(mode), q_(std::move(q)), bits_(bits) {
    if (mode_ == Mode::q && !q_) throw Error(ErrorCode::invalid_argument, "q-mode term without a base");
  }

  size_t dim() const { return dim_; }
  Mode mode() const { return mode_; }
  const std::optional<QBase>& q() const { return q_; }
  Bits bits() const { return bits_; }
  const std::vector<Factor>& factors() const { return factors_; }

  /// (base)_arg in the numerator.
  TermSpec& num(const HValue& base, Affine arg) { return add(FactorKind::symbol, +1, base, std::move(arg)); }
  /// (base)_arg in the denominator.
  TermSpec& den(const HValue& base, Affine arg) { return add(FactorKind::symbol, -1, base, std::move(arg)); }
  /// base^arg.
  TermSpec& power(const HValue& base, Affine arg) { return add(FactorKind::power, +1, base, std::move(arg)); }
  /// base^(arg (arg - 1) / 2).
  TermSpec& gauss(const HValue& base, Affine arg) { return add(FactorKind::gauss, +1, base, std::move(arg)); }
  /// (1 - base q^arg) / (1 - base), or (base + arg) / base classically.
  TermSpec& well_poised(const HValue& base, Affine arg) {
    return add(FactorKind::well_poised, +1, base, std::move(arg));
  }
  /// Delta(z q^y) / Delta(z), or Delta(z + y) / Delta(z) classically.
  TermSpec& vandermonde(std::vector<HValue> nodes) {
    if (nodes.size() != dim_) throw Error(ErrorCode::invalid_argument, "Vandermonde needs one node per index");
    factors_.push_back(Factor{FactorKind::vandermonde, 1, HValue(bits_, 1), Affine::constant(dim_, 0), std::move(nodes)});
    return *this;
  }

 private:
  TermSpec& add(FactorKind kind, int sign, const HValue& base, Affine arg) {
    if (arg.coef.size() != dim_) throw Error(ErrorCode::invalid_argument, "factor index has wrong dimension");
    if (base.bits() != bits_) throw Error(ErrorCode::precision_mismatch, "factor base precision");
    factors_.push_back(Factor{kind, sign, base, std::move(arg), {}});
    return *this;
  }

  size_t dim_;
  Mode mode_;
  std::optional<QBase> q_;
  Bits bits_;
  std::vector<Factor> factors_;
};

namespace detail {

/// Values indexed by all integers, grown outward from 0 on demand.
template <class T>
class BiTable {
 public:
  bool has(long k) const {
    return k >= 0 ? static_cast<size_t>(k) < pos_.size() : static_cast<size_t>(-k - 1) < neg_.size();
  }
  const T& at(long k) const { return k >= 0 ? pos_[static_cast<size_t>(k)] : neg_[static_cast<size_t>(-k - 1)]; }
  long next_up() const { return static_cast<long>(pos_.size()); }
  long next_down() const { return -static_cast<long>(neg_.size()) - 1; }
  void push_up(T v) { pos_.push_back(std::move(v)); }
  void push_down(T v) { neg_.push_back(std::move(v)); }

 private:
  std::vector<T> pos_, neg_;
};

inline long scale_for(const HValue& x) { return std::max(x.exponent(), 1L); }

}  // namespace detail

/// Evaluates a TermSpec at lattice points. The tabulated path grows each
/// factor by its one-step recurrence; the reference path recomputes every
/// factor from its definition.
class TermEvaluator {
 public:
  TermEvaluator(const TermSpec& spec, bool tabulated) : spec_(spec), tabulated_(tabulated) {
    tables_.resize(spec.factors().size());
    for (const auto& f : spec.factors()) {
      if (f.kind == FactorKind::vandermonde) {
        HValue den(spec.bits(), 1);
        for (size_t i = 0; i < f.nodes.size(); ++i) {
          for (size_t j = i + 1; j < f.nodes.size(); ++j) {
            HValue d = f.nodes[i] - f.nodes[j];
            if (negligible(d, std::max(f.nodes[i].exponent(), f.nodes[j].exponent()))) {
              throw Error(ErrorCode::degenerate_nodes, "coinciding Vandermonde nodes");
            }
            den *= d;
          }
        }
        vdm_den_.push_back(den.reciprocal());
      } else {
        vdm_den_.push_back(HValue(spec.bits(), 1));
      }
    }
  }

  long pole_hits() const { return pole_hits_; }

  /// Product of all factors with zero/pole bookkeeping.
  Tracked tracked(std::span<const long> y) {
    Tracked acc(HValue(spec_.bits(), 1));
    const auto& fs = spec_.factors();
    for (size_t i = 0; i < fs.size(); ++i) {
      if (tabulated_) {
        multiply_tabulated(acc, i, y);
      } else {
        multiply_reference(acc, i, y);
      }
    }
    return acc;
  }

  HValue operator()(std::span<const long> y) {
    Tracked t = tracked(y);
    if (t.poles > 0) {
      if (t.zeros > t.poles) {
        ++pole_hits_;
        return HValue(spec_.bits());
      }
      std::string at;
      for (long v : y) at += (at.empty() ? "" : ",") + std::to_string(v);
      throw Error(ErrorCode::pole_in_term, "denominator vanishes at y=(" + at + ")");
    }
    if (t.zeros > 0) return HValue(spec_.bits());
    return std::move(t.value);
  }

 private:
  struct Tables {
    detail::BiTable<Tracked> sym;
    detail::BiTable<HValue> pow;
    // running base*q^k at the growth fronts of a symbol table
    std::optional<HValue> up, down;
  };

  const HValue& qpow(long k) { return power_of(qpow_, spec_.q()->value(), k); }

  const HValue& power_of(detail::BiTable<HValue>& t, const HValue& base, long k) {
    if (!t.has(0)) t.push_up(HValue(spec_.bits(), 1));
    while (!t.has(k)) {
      if (k >= 0) {
        t.push_up(t.at(t.next_up() - 1) * base);
      } else {
        if (base.is_zero()) throw Error(ErrorCode::division_by_zero_pole, "negative power of zero");
        if (!inv_cache_.count(&base)) inv_cache_.emplace(&base, base.reciprocal());
        t.push_down(t.at(t.next_down() + 1) * inv_cache_.at(&base));
      }
    }
    return t.at(k);
  }

  const Tracked& symbol(Tables& t, const HValue& base, long k) {
    const Bits b = spec_.bits();
    if (!t.sym.has(0)) {
      t.sym.push_up(Tracked(HValue(b, 1)));
      if (spec_.mode() == Mode::q) {
        t.up = base;
        t.down = base * spec_.q()->inverse();
      } else {
        t.up = base;
        t.down = base - 1;
      }
    }
    while (!t.sym.has(k)) {
      if (k >= 0) {
        Tracked next = t.sym.at(t.sym.next_up() - 1);
        if (spec_.mode() == Mode::q) {
          absorb_factor(next, t.up->one_minus(), t.up->exponent(), +1);
          *t.up *= spec_.q()->value();
        } else {
          absorb_factor(next, *t.up, detail::scale_for(*t.up), +1);
          *t.up += 1;
        }
        t.sym.push_up(std::move(next));
      } else {
        Tracked next = t.sym.at(t.sym.next_down() + 1);
        if (spec_.mode() == Mode::q) {
          absorb_factor(next, t.down->one_minus(), t.down->exponent(), -1);
          *t.down *= spec_.q()->inverse();
        } else {
          absorb_factor(next, *t.down, detail::scale_for(*t.down), -1);
          *t.down += -1;
        }
        t.sym.push_down(std::move(next));
      }
    }
    return t.sym.at(k);
  }

  void multiply_tabulated(Tracked& acc, size_t i, std::span<const long> y) {
    const Factor& f = spec_.factors()[i];
    Tables& t = tables_[i];
    switch (f.kind) {
      case FactorKind::symbol: {
        const Tracked& s = symbol(t, f.base, f.arg(y));
        if (f.sign > 0) {
          acc *= s;
        } else {
          acc /= s;
        }
        return;
      }
      case FactorKind::power:
        acc *= power_of(t.pow, f.base, f.arg(y));
        return;
      case FactorKind::gauss: {
        long k = f.arg(y);
        acc *= power_of(t.pow, f.base, k * (k - 1) / 2);
        return;
      }
      case FactorKind::well_poised:
        multiply_well_poised(acc, f, f.arg(y), true);
        return;
      case FactorKind::vandermonde:
        multiply_vandermonde(acc, f, vdm_den_[i], y, true);
        return;
    }
  }

  void multiply_reference(Tracked& acc, size_t i, std::span<const long> y) {
    const Factor& f = spec_.factors()[i];
    switch (f.kind) {
      case FactorKind::symbol: {
        long k = f.arg(y);
        Tracked s = spec_.mode() == Mode::q ? qpoch_tracked(f.base, *spec_.q(), k) : poch_tracked(f.base, k);
        if (f.sign > 0) {
          acc *= s;
        } else {
          acc /= s;
        }
        return;
      }
      case FactorKind::power:
        acc *= pow(f.base, f.arg(y));
        return;
      case FactorKind::gauss: {
        long k = f.arg(y);
        acc *= pow(f.base, k * (k - 1) / 2);
        return;
      }
      case FactorKind::well_poised:
        multiply_well_poised(acc, f, f.arg(y), false);
        return;
      case FactorKind::vandermonde: {
        std::vector<long> yy(y.begin(), y.end());
        HValue v = spec_.mode() == Mode::q ? vandermonde_ratio(f.nodes, yy, *spec_.q())
                                           : vandermonde_ratio_classical(f.nodes, yy);
        acc *= v;
        return;
      }
    }
  }

  void multiply_well_poised(Tracked& acc, const Factor& f, long k, bool tabulated) {
    if (spec_.mode() == Mode::q) {
      HValue x = f.base * (tabulated ? qpow(k) : spec_.q()->pow(k));
      absorb_factor(acc, x.one_minus(), x.exponent(), +1);
      absorb_factor(acc, f.base.one_minus(), f.base.exponent(), -1);
    } else {
      HValue x = f.base + k;
      absorb_factor(acc, x, detail::scale_for(f.base), +1);
      absorb_factor(acc, f.base, detail::scale_for(f.base), -1);
    }
  }

  void multiply_vandermonde(Tracked& acc, const Factor& f, const HValue& inv_den, std::span<const long> y,
                            bool tabulated) {
    const size_t n = f.nodes.size();
    HValue num(spec_.bits(), 1);
    if (spec_.mode() == Mode::q) {
      scratch_.clear();
      for (size_t i = 0; i < n; ++i) {
        scratch_.push_back(f.nodes[i] * (tabulated ? qpow(y[i]) : spec_.q()->pow(y[i])));
      }
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) num *= scratch_[i] - scratch_[j];
      }
    } else {
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) num *= (f.nodes[i] - f.nodes[j]) + (y[i] - y[j]);
      }
    }
    acc *= num * inv_den;
  }

  const TermSpec& spec_;
  bool tabulated_;
  std::vector<Tables> tables_;
  std::vector<HValue> vdm_den_;
  detail::BiTable<HValue> qpow_;
  std::map<const HValue*, HValue> inv_cache_;
  std::vector<HValue> scratch_;
  long pole_hits_ = 0;
};

/// Closed-form factor of one side: products of infinite and finite
/// Pochhammer symbols, gamma values, integer powers and constants.
class Prefactor {
 public:
  Prefactor(Mode mode, std::optional<QBase> q, Bits bits) : mode_(mode), q_(std::move(q)), bits_(bits) {}

  Prefactor& qinf(const HValue& base, int sign = +1) { return add(Kind::qinf, sign, base, 0); }
  Prefactor& qinf_den(const HValue& base) { return add(Kind::qinf, -1, base, 0); }
  /// (base)_k to the power sign, q-shifted or classical by mode.
  Prefactor& poch(const HValue& base, long k, int sign = +1) { return add(Kind::poch, sign, base, k); }
  Prefactor& poch_den(const HValue& base, long k) { return add(Kind::poch, -1, base, k); }
  Prefactor& gamma(const HValue& z, int sign = +1) { return add(Kind::gamma, sign, z, 0); }
  Prefactor& gamma_den(const HValue& z) { return add(Kind::gamma, -1, z, 0); }
  Prefactor& power(const HValue& base, long k) { return add(Kind::power, +1, base, k); }
  Prefactor& times(const HValue& v) { return add(Kind::constant, +1, v, 0); }
  Prefactor& divide(const HValue& v) { return add(Kind::constant, -1, v, 0); }

  Bits bits() const { return bits_; }
  size_t size() const { return items_.size(); }

  /// Gamma factors are accumulated as logarithms and exponentiated once.
  Tracked evaluate() const {
    Tracked acc(HValue(bits_, 1));
    HValue log_sum(bits_);
    bool any_gamma = false;
    for (const auto& it : items_) {
      switch (it.kind) {
        case Kind::qinf: {
          Tracked t = qpoch_inf_tracked(it.base, *q_);
          if (it.sign > 0) {
            acc *= t;
          } else {
            acc /= t;
          }
          break;
        }
        case Kind::poch: {
          Tracked t = mode_ == Mode::q ? qpoch_tracked(it.base, *q_, it.k) : poch_tracked(it.base, it.k);
          if (it.sign > 0) {
            acc *= t;
          } else {
            acc /= t;
          }
          break;
        }
        case Kind::gamma: {
          long n = 0;
          if (near_nonpositive_integer(it.base, &n)) {
            (it.sign > 0 ? acc.poles : acc.zeros) += 1;
            break;
          }
          HValue lg = log_gamma(it.base);
          if (it.sign > 0) {
            log_sum += lg;
          } else {
            log_sum -= lg;
          }
          any_gamma = true;
          break;
        }
        case Kind::power:
          acc *= pow(it.base, it.k);
          break;
        case Kind::constant:
          if (it.sign > 0) {
            acc *= it.base;
          } else {
            acc.value /= it.base;
          }
          break;
      }
    }
    if (any_gamma) acc *= exp(log_sum);
    return acc;
  }

  /// Smallest distance of any denominator factor (or gamma argument in the
  /// numerator) from zero; pole-scan helper for the sampler.
  double clearance() const {
    double best = INFINITY;
    for (const auto& it : items_) {
      switch (it.kind) {
        case Kind::qinf:
          if (it.sign < 0) best = std::min(best, qinf_distance(it.base));
          break;
        case Kind::poch:
          if (it.sign < 0 && it.k > 0) best = std::min(best, factor_distance(it.base, 0, it.k - 1));
          if (it.sign > 0 && it.k < 0) best = std::min(best, factor_distance(it.base, it.k, -1));
          break;
        case Kind::gamma:
          if (it.sign > 0) best = std::min(best, gamma_pole_distance(it.base));
          break;
        case Kind::power:
          if (it.k < 0) best = std::min(best, it.base.abs_double());
          break;
        case Kind::constant:
          if (it.sign < 0) best = std::min(best, it.base.abs_double());
          break;
      }
    }
    return best;
  }

  /// min over j in [j0, j1] of |1 - base q^j| (or |base + j| classically).
  double factor_distance(const HValue& base, long j0, long j1) const {
    double best = INFINITY;
    if (j1 < j0) return best;
    if (mode_ == Mode::q) {
      HValue x = base * q_->pow(j0);
      for (long j = j0; j <= j1; ++j) {
        best = std::min(best, x.one_minus().abs_double());
        x *= q_->value();
      }
    } else {
      for (long j = j0; j <= j1; ++j) best = std::min(best, (base + j).abs_double());
    }
    return best;
  }

 private:
  enum class Kind { qinf, poch, gamma, power, constant };
  struct Item {
    Kind kind;
    int sign;
    HValue base;
    long k;
  };

  Prefactor& add(Kind kind, int sign, const HValue& base, long k) {
    if (base.bits() != bits_) throw Error(ErrorCode::precision_mismatch, "prefactor precision");
    if ((kind == Kind::qinf || (kind == Kind::poch && mode_ == Mode::q)) && !q_) {
      throw Error(ErrorCode::invalid_argument, "q-product without a base");
    }
    items_.push_back(Item{kind, sign, base, k});
    return *this;
  }

  static bool near_nonpositive_integer(const HValue& z, long* n) {
    double re = z.re().to_double();
    if (re > 0.5) return false;
    long k = std::lround(re);
    HValue d = z - k;
    if (!negligible(d, detail::scale_for(z))) return false;
    *n = k;
    return true;
  }

  double gamma_pole_distance(const HValue& z) const {
    double re = z.re().to_double(), im = z.im().to_double();
    long k = std::min(0L, std::lround(re));
    return std::hypot(re - static_cast<double>(k), im);
  }

  double qinf_distance(const HValue& base) const {
    double best = INFINITY;
    HValue x = base;
    for (int j = 0; j < 10000; ++j) {
      if (x.abs_double() < 0.5) break;
      best = std::min(best, x.one_minus().abs_double());
      x *= q_->value();
    }
    return std::min(best, 0.5);
  }

  Mode mode_;
  std::optional<QBase> q_;
  Bits bits_;
  std::vector<Item> items_;
};

enum class DomainKind { hyperplane, orthant, lattice, box, box_hyperplane, simplex };

/// Index set of a sum: dimension, kind, and N / m where relevant.
struct Domain {
  DomainKind kind = DomainKind::box;
  size_t dim = 0;
  long N = 0;
  std::vector<long> m;

  static Domain hyperplane(size_t n, long N) { return Domain{DomainKind::hyperplane, n, N, {}}; }
  static Domain orthant(size_t n) { return Domain{DomainKind::orthant, n, 0, {}}; }
  static Domain lattice(size_t n) { return Domain{DomainKind::lattice, n, 0, {}}; }
  static Domain box(std::vector<long> m) {
    size_t n = m.size();
    return Domain{DomainKind::box, n, 0, std::move(m)};
  }
  static Domain box_hyperplane(std::vector<long> m, long N) {
    size_t n = m.size();
    return Domain{DomainKind::box_hyperplane, n, N, std::move(m)};
  }
  static Domain simplex(size_t n, long N) { return Domain{DomainKind::simplex, n, N, {}}; }

  bool infinite() const {
    return kind == DomainKind::hyperplane || kind == DomainKind::orthant || kind == DomainKind::lattice;
  }
};

struct Series {
  TermSpec term;
  Domain domain;
};

/// One side of an identity: prefactor times an optional sum.
struct Side {
  Prefactor pre;
  std::optional<Series> series;
};

struct SideValue {
  HValue value;
  SumDiagnostics diag;
};

/// Coordinate and total ranges outside of which the summand vanishes
/// identically, read off from numerator symbols (q^-j)_k, (-j)_k and
/// denominator symbols 1/(q^j)_k, 1/(j)_k.
inline IndexBounds termination_bounds(const TermSpec& spec) {
  IndexBounds b = IndexBounds::unbounded(spec.dim());
  for (const auto& f : spec.factors()) {
    if (f.kind != FactorKind::symbol) continue;
    long j = 0;
    bool hit = false;
    if (spec.mode() == Mode::q) {
      const QBase& q = *spec.q();
      double lq = std::log(q.value().abs_double());
      if (f.base.is_zero()) continue;
      double lb = f.base.log2_abs() * std::log(2.0);
      double r = lb / lq;
      if (std::fabs(r) > 1e6) continue;
      j = std::lround(r);
      hit = negligible((f.base * q.pow(-j)).one_minus(), 1);
    } else {
      double re = f.base.re().to_double();
      if (std::fabs(re) > 1e6) continue;
      j = std::lround(re);
      hit = negligible(f.base - j, detail::scale_for(f.base));
    }
    if (!hit) continue;
    long upper = kUnbounded, lower = -kUnbounded;
    if (spec.mode() == Mode::q) {
      if (f.sign > 0 && j <= 0) upper = -j;      // (q^-J)_k = 0 for k > J
      if (f.sign < 0 && j >= 1) lower = 1 - j;   // 1/(q^j)_k = 0 for k <= -j
    } else {
      if (f.sign > 0 && j <= 0) upper = -j;      // (-J)_k = 0 for k > J
      if (f.sign < 0 && j >= 1) lower = 1 - j;   // 1/(j)_k = 0 for k <= -j
    }
    if (upper == kUnbounded && lower == -kUnbounded) continue;
    // the bound applies to arg = c0 + (coordinate or total)
    long c = f.arg.single_coordinate();
    if (c >= 0) {
      auto k = static_cast<size_t>(c);
      if (upper < kUnbounded) b.hi[k] = std::min(b.hi[k], upper - f.arg.c0);
      if (lower > -kUnbounded) b.lo[k] = std::max(b.lo[k], lower - f.arg.c0);
    } else if (f.arg.is_total()) {
      if (upper < kUnbounded) b.total_hi = std::min(b.total_hi, upper - f.arg.c0);
      if (lower > -kUnbounded) b.total_lo = std::max(b.total_lo, lower - f.arg.c0);
    }
  }
  if (spec.dim() == 1) {
    b.lo[0] = std::max(b.lo[0], b.total_lo);
    b.hi[0] = std::min(b.hi[0], b.total_hi);
  }
  return b;
}

/// Per-coordinate window actually visited by the summation (used by the
/// pole scan): finite domains exactly, infinite ones out to radius + 2.
inline IndexBounds scan_window(const Series& s, long radius) {
  const size_t n = s.domain.dim;
  IndexBounds w = IndexBounds::unbounded(n);
  const long r = radius + 2;
  switch (s.domain.kind) {
    case DomainKind::box:
    case DomainKind::box_hyperplane:
      for (size_t i = 0; i < n; ++i) {
        w.lo[i] = 0;
        w.hi[i] = s.domain.m[i];
      }
      return w;
    case DomainKind::simplex:
      for (size_t i = 0; i < n; ++i) {
        w.lo[i] = 0;
        w.hi[i] = std::max(0L, s.domain.N);
      }
      return w;
    case DomainKind::orthant:
    case DomainKind::hyperplane:
    case DomainKind::lattice: {
      IndexBounds t = termination_bounds(s.term);
      if (s.domain.kind == DomainKind::hyperplane) detail::tighten_for_hyperplane(t, s.domain.N);
      for (size_t i = 0; i < n; ++i) {
        w.lo[i] = std::max(s.domain.kind == DomainKind::orthant ? 0L : -r, t.lo[i]);
        w.hi[i] = std::min(r, t.hi[i]);
      }
      return w;
    }
  }
  return w;
}

/// Smallest |1 - base q^j| (|base + j| classically) over every denominator
/// factor the summation can touch inside the window, and over Vandermonde
/// node separations. Large when nothing is close to a pole.
inline double series_clearance(const Series& s, long radius) {
  const TermSpec& spec = s.term;
  IndexBounds w = scan_window(s, radius);
  if (w.empty()) return INFINITY;
  Prefactor probe(spec.mode(), spec.q(), spec.bits());
  double best = INFINITY;
  for (const auto& f : spec.factors()) {
    switch (f.kind) {
      case FactorKind::symbol: {
        auto [kmin, kmax] = f.arg.range(w.lo, w.hi);
        if (f.sign < 0 && kmax >= 1) best = std::min(best, probe.factor_distance(f.base, 0, kmax - 1));
        if (f.sign > 0 && kmin < 0) best = std::min(best, probe.factor_distance(f.base, kmin, -1));
        break;
      }
      case FactorKind::well_poised:
        best = std::min(best, spec.mode() == Mode::q ? f.base.one_minus().abs_double() : f.base.abs_double());
        break;
      case FactorKind::power:
      case FactorKind::gauss: {
        auto [kmin, kmax] = f.arg.range(w.lo, w.hi);
        (void)kmax;
        if (kmin < 0) best = std::min(best, f.base.abs_double());
        break;
      }
      case FactorKind::vandermonde:
        for (size_t i = 0; i < f.nodes.size(); ++i) {
          for (size_t j = i + 1; j < f.nodes.size(); ++j) {
            double d = (f.nodes[i] - f.nodes[j]).abs_double();
            // classical nodes differing by an integer are as bad as equal ones
            if (spec.mode() == Mode::classical) {
              HValue diff = f.nodes[i] - f.nodes[j];
              double re = diff.re().to_double();
              d = std::hypot(re - std::nearbyint(re), diff.im().to_double());
              if (std::nearbyint(re) == 0.0) d = std::min(d, std::hypot(re, diff.im().to_double()));
            }
            best = std::min(best, d);
          }
        }
        break;
    }
  }
  return best;
}

/// Sums a series over its domain.
inline SumResult sum_series(const Series& s, const TruncationPolicy& policy, bool tabulated = true) {
  TermEvaluator ev(s.term, tabulated);
  const Bits bits = s.term.bits();
  SumResult r{HValue(bits), {}};
  switch (s.domain.kind) {
    case DomainKind::box:
      r = sum_box(ev, s.domain.m, bits);
      break;
    case DomainKind::box_hyperplane:
      r = sum_box_hyperplane(ev, s.domain.m, s.domain.N, bits);
      break;
    case DomainKind::simplex:
      r = sum_simplex(ev, s.domain.dim, s.domain.N, bits);
      break;
    case DomainKind::hyperplane:
      r = sum_hyperplane_bilateral(ev, s.domain.dim, s.domain.N, policy, bits, termination_bounds(s.term));
      break;
    case DomainKind::orthant:
      r = sum_orthant(ev, s.domain.dim, policy, bits, termination_bounds(s.term));
      break;
    case DomainKind::lattice:
      r = sum_lattice_bilateral(ev, s.domain.dim, policy, bits, termination_bounds(s.term));
      break;
  }
  r.diag.pole_hits = ev.pole_hits();
  return r;
}

/// Value of one side: prefactor times the sum (or the prefactor alone).
inline SideValue evaluate_side(const Side& side, const TruncationPolicy& policy, bool tabulated = true) {
  Tracked pre = side.pre.evaluate();
  if (!side.series) {
    SumDiagnostics d;
    d.converged = true;
    d.terminating = true;
    return SideValue{pre.resolve("closed form"), d};
  }
  SumResult r = sum_series(*side.series, policy, tabulated);
  if (pre.poles > 0 && r.value.is_zero() && pre.zeros <= pre.poles) {
    throw Error(ErrorCode::division_by_zero_pole, "prefactor pole times vanishing sum");
  }
  HValue v = pre.resolve("prefactor") * r.value;
  return SideValue{std::move(v), r.diag};
}

}  // namespace kmv
