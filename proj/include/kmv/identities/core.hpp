#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "kmv/error.hpp"
#include "kmv/mparith.hpp"
#include "kmv/params.hpp"
#include "kmv/sampling.hpp"
#include "kmv/series.hpp"

namespace kmv {

enum class ConstraintKind { modulus_lt_1, exact_equality, nonvanishing_denominator, nonneg_integer, real_part_gt };

inline std::string_view to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::modulus_lt_1: return "modulus_lt_1";
    case ConstraintKind::exact_equality: return "exact_equality";
    case ConstraintKind::nonvanishing_denominator: return "nonvanishing_denominator";
    case ConstraintKind::nonneg_integer: return "nonneg_integer";
    case ConstraintKind::real_part_gt: return "real_part_gt";
  }
  return "unknown";
}

/// Measured quantity of a constraint and the bound it is compared with.
struct Measure {
  double value = 0;
  double bound = 0;
};

/// modulus_lt_1: value < bound (bound is 1, or |t| for two-sided forms);
/// exact_equality: relative residual value <= bound;
/// nonneg_integer: value >= 0;
/// real_part_gt: value > bound;
/// nonvanishing_denominator: smallest factor distance value > bound.
struct Constraint {
  ConstraintKind kind;
  std::string expression;
  double threshold = 0;
  std::function<Measure(const ParamSet&)> measure;

  /// With margin < 1 a modulus constraint must hold as value <= margin * bound.
  bool satisfied(const ParamSet& ps, double margin = 1.0) const {
    Measure m = measure(ps);
    if (!std::isfinite(m.value)) return false;
    switch (kind) {
      case ConstraintKind::modulus_lt_1: return margin < 1 ? m.value <= margin * m.bound : m.value < m.bound;
      case ConstraintKind::exact_equality: return m.value <= m.bound;
      case ConstraintKind::nonneg_integer: return m.value >= 0;
      case ConstraintKind::real_part_gt: return m.value > m.bound;
      case ConstraintKind::nonvanishing_denominator: return m.value > m.bound;
    }
    return false;
  }
};

enum class SlotKind { scalar, vector, integer, int_vector };

/// One required parameter; length is an expression over the dimensions
/// ("n", "p", "n+1", ...) for vectors.
struct SchemaEntry {
  std::string name;
  SlotKind kind;
  std::string length;
  std::function<long(const ParamSet&)> size;
};

struct Degeneration {
  std::string name;
  std::map<std::string, long> overrides;
};

using SideBuilder = std::function<Side(const ParamSet&)>;

struct IdentityDescriptor {
  std::string id;
  std::string title;
  Mode mode = Mode::q;
  std::vector<SchemaEntry> schema;
  std::vector<Constraint> constraints;
  /// parameters solved for when sampling, to satisfy equalities and to
  /// place the convergence modulus
  std::string dependent;
  SideBuilder lhs, rhs;
  std::function<ParamSet(Draw&)> draw;
  std::vector<Degeneration> degenerations;
  /// both sides are finite sums or closed forms for every admissible set
  bool finite = false;
};

namespace build {

// ---- small arithmetic helpers ------------------------------------------

inline HValue one(Bits b) { return HValue(b, 1); }
inline HValue cst(Bits b, long v) { return HValue(b, v); }

inline HValue prod(const std::vector<HValue>& v, Bits b) {
  HValue p(b, 1);
  for (const auto& x : v) p *= x;
  return p;
}
inline HValue total(const std::vector<HValue>& v, Bits b) {
  HValue s(b);
  for (const auto& x : v) s += x;
  return s;
}
inline long total(const std::vector<long>& v) {
  long s = 0;
  for (long x : v) s += x;
  return s;
}
inline HValue operator-(long k, const HValue& a) { return -a + k; }
inline HValue operator+(long k, const HValue& a) { return a + k; }

/// Rescales v so that its product becomes target, spreading the factor
/// evenly over the coordinates.
inline void rescale_to_product(std::vector<HValue>& v, const HValue& target, Bits b) {
  if (v.empty()) return;
  HValue ratio = target / prod(v, b);
  HValue s = root(ratio, static_cast<long>(v.size()));
  for (auto& x : v) x *= s;
  // the last coordinate absorbs rounding so the product is exact to working precision
  HValue rest(b, 1);
  for (size_t i = 0; i + 1 < v.size(); ++i) rest *= v[i];
  v.back() = target / rest;
}

// ---- schema and constraint builders ------------------------------------

inline std::function<long(const ParamSet&)> dim_of(const std::string& expr) {
  // "n", "p", "r", "nt", optionally followed by +k or -k
  std::string name = expr;
  long shift = 0;
  auto pos = expr.find_first_of("+-");
  if (pos != std::string::npos) {
    name = expr.substr(0, pos);
    shift = std::stol(expr.substr(pos));
  }
  return [name, shift](const ParamSet& ps) { return ps.integer(name) + shift; };
}

inline SchemaEntry vec(const std::string& name, const std::string& len) {
  return SchemaEntry{name, SlotKind::vector, len, dim_of(len)};
}
inline SchemaEntry ivec(const std::string& name, const std::string& len) {
  return SchemaEntry{name, SlotKind::int_vector, len, dim_of(len)};
}
inline SchemaEntry scalar(const std::string& name) { return SchemaEntry{name, SlotKind::scalar, "", {}}; }
inline SchemaEntry integer(const std::string& name) { return SchemaEntry{name, SlotKind::integer, "", {}}; }

inline Constraint modulus(const std::string& expr, std::function<HValue(const ParamSet&)> f) {
  return Constraint{ConstraintKind::modulus_lt_1, expr, 1.0,
                    [f](const ParamSet& ps) { return Measure{f(ps).abs_double(), 1.0}; }};
}
/// |f| < |g|
inline Constraint modulus_below(const std::string& expr, std::function<HValue(const ParamSet&)> f,
                                std::function<HValue(const ParamSet&)> g) {
  return Constraint{ConstraintKind::modulus_lt_1, expr, 1.0,
                    [f, g](const ParamSet& ps) { return Measure{f(ps).abs_double(), g(ps).abs_double()}; }};
}
/// lhs = rhs up to a few dozen ulps of working precision.
inline Constraint equality(const std::string& expr, std::function<HValue(const ParamSet&)> lhs,
                           std::function<HValue(const ParamSet&)> rhs) {
  return Constraint{ConstraintKind::exact_equality, expr, 0.0, [lhs, rhs](const ParamSet& ps) {
                      HValue l = lhs(ps), r = rhs(ps);
                      double scale = std::max(l.abs_double(), r.abs_double());
                      double diff = (l - r).abs_double();
                      double rel = scale > 0 ? diff / scale : diff;
                      return Measure{rel, std::ldexp(1.0, 24 - static_cast<int>(ps.bits()))};
                    }};
}
/// Re f > g.
inline Constraint real_part(const std::string& expr, std::function<HValue(const ParamSet&)> f,
                            std::function<double(const ParamSet&)> g) {
  return Constraint{ConstraintKind::real_part_gt, expr, 0.0,
                    [f, g](const ParamSet& ps) { return Measure{f(ps).re().to_double(), g(ps)}; }};
}
/// Every listed integer (scalar or vector) is >= 0.
inline Constraint nonneg(const std::string& expr, std::vector<std::string> names) {
  return Constraint{ConstraintKind::nonneg_integer, expr, 0.0, [names](const ParamSet& ps) {
                      double lo = 0;
                      for (const auto& nm : names) {
                        if (ps.has_ints(nm)) {
                          for (long v : ps.ints(nm)) lo = std::min(lo, static_cast<double>(v));
                        } else {
                          lo = std::min(lo, static_cast<double>(ps.integer(nm)));
                        }
                      }
                      return Measure{lo, 0.0};
                    }};
}

/// Smallest distance of any denominator factor from zero over both sides.
inline double side_clearance(const Side& s, long radius) {
  double c = s.pre.clearance();
  if (s.series) c = std::min(c, series_clearance(*s.series, radius));
  return c;
}

inline Constraint nonvanishing(SideBuilder lhs, SideBuilder rhs, long radius) {
  return Constraint{ConstraintKind::nonvanishing_denominator, "no denominator factor vanishes", 0.0,
                    [lhs, rhs, radius](const ParamSet& ps) {
                      try {
                        double c = std::min(side_clearance(lhs(ps), radius), side_clearance(rhs(ps), radius));
                        // no denominator factors at all
                        if (std::isinf(c) && c > 0) c = std::numeric_limits<double>::max();
                        return Measure{c, 0.0};
                      } catch (const Error&) {
                        return Measure{0.0, 0.0};
                      }
                    }};
}

// ---- factor groups -------------------------------------------------------

/// Unit vector form y_k.
inline Affine yk(size_t n, size_t k) { return Affine::coord(n, k); }
inline Affine ytot(size_t n) { return Affine::total(n); }

/// q-case U(n) Karlsson-Minton factor: prod_{k,i} (c_i z_k q^{m_i})_{y_k} / (c_i z_k)_{y_k}.
inline void km_group(TermSpec& t, const std::vector<HValue>& c, const std::vector<long>& m,
                     const std::vector<HValue>& z, const QBase& q) {
  const size_t n = z.size();
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < c.size(); ++i) {
      HValue cz = c[i] * z[k];
      t.num(cz * q.pow(m[i]), yk(n, k)).den(cz, yk(n, k));
    }
  }
}

/// prod_{i,k} (a_i z_k)_{y_k} / (b_i z_k)_{y_k}.
inline void ab_group(TermSpec& t, const std::vector<HValue>& a, const std::vector<HValue>& b,
                     const std::vector<HValue>& z) {
  const size_t n = z.size();
  for (size_t k = 0; k < n; ++k) {
    for (const auto& ai : a) t.num(ai * z[k], yk(n, k));
    for (const auto& bi : b) t.den(bi * z[k], yk(n, k));
  }
}

/// Box-sum companion: Delta(c q^x)/Delta(c) prod_{i,k} (q^{-m_k} c_i/c_k)_{x_i} / (q c_i/c_k)_{x_i}.
inline void box_group(TermSpec& t, const std::vector<HValue>& c, const std::vector<long>& m, const QBase& q) {
  const size_t p = c.size();
  t.vandermonde(c);
  for (size_t i = 0; i < p; ++i) {
    for (size_t k = 0; k < p; ++k) {
      HValue r = c[i] / c[k];
      t.num(r * q.pow(-m[k]), yk(p, i)).den(r * q.value(), yk(p, i));
    }
  }
}

/// Gustafson product prod_{i,k} (b_i/a_k, q z_k/z_i)_inf / (q/(a_k z_i), b_i z_k)_inf.
inline void gustafson_product(Prefactor& pre, const std::vector<HValue>& a, const std::vector<HValue>& b,
                              const std::vector<HValue>& z, const QBase& q) {
  const size_t n = z.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < n; ++k) {
      pre.qinf(b[i] / a[k]).qinf(q.value() * z[k] / z[i]);
      pre.qinf_den(q.value() / (a[k] * z[i])).qinf_den(b[i] * z[k]);
    }
  }
}

/// Classical companions (additive nodes).
inline void km_group_classical(TermSpec& t, const std::vector<HValue>& c, const std::vector<long>& m,
                               const std::vector<HValue>& z) {
  const size_t n = z.size();
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < c.size(); ++i) {
      HValue cz = c[i] + z[k];
      t.num(cz + m[i], yk(n, k)).den(cz, yk(n, k));
    }
  }
}
inline void ab_group_classical(TermSpec& t, const std::vector<HValue>& a, const std::vector<HValue>& b,
                               const std::vector<HValue>& z) {
  const size_t n = z.size();
  for (size_t k = 0; k < n; ++k) {
    for (const auto& ai : a) t.num(ai + z[k], yk(n, k));
    for (const auto& bi : b) t.den(bi + z[k], yk(n, k));
  }
}
/// Delta(c+x)/Delta(c) prod_{i,k} (c_i - c_k - m_k)_{x_i} / (1 + c_i - c_k)_{x_i}.
inline void box_group_classical(TermSpec& t, const std::vector<HValue>& c, const std::vector<long>& m) {
  const size_t p = c.size();
  t.vandermonde(c);
  for (size_t i = 0; i < p; ++i) {
    for (size_t k = 0; k < p; ++k) {
      HValue d = c[i] - c[k];
      t.num(d - m[k], yk(p, i)).den(d + 1, yk(p, i));
    }
  }
}

// ---- draw helpers ----------------------------------------------------------

/// Vector of free parameters whose product is exactly target.
inline std::vector<HValue> free_with_product(Draw& d, size_t len, const HValue& target) {
  std::vector<HValue> v = d.free(len);
  rescale_to_product(v, target, d.bits());
  return v;
}

}  // namespace build
}  // namespace kmv
