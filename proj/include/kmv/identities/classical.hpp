#pragma once

// Classical (q = 1) identities. By default parameters are drawn so that
// every series terminates; with terminating = false they are drawn inside
// the region of convergence and the series decay only polynomially.

#include <algorithm>
#include <cmath>

#include "kmv/identities/core.hpp"

namespace kmv::build {

inline HValue cpar(Draw& dr) { return dr.classical(dr.cfg().mag_lo, dr.cfg().mag_hi); }
inline std::vector<HValue> cpar(Draw& dr, size_t len) {
  std::vector<HValue> v;
  for (size_t i = 0; i < len; ++i) v.push_back(cpar(dr));
  return v;
}
inline HValue whole(Bits b, long k) { return HValue(b, k); }

inline TermSpec classical_term(size_t dim, Bits bits) { return TermSpec(dim, Mode::classical, std::nullopt, bits); }
inline Prefactor classical_pre(Bits bits) { return Prefactor(Mode::classical, std::nullopt, bits); }

/// Sum over y >= 0 of (a)_y (b)_y prod (c_i + m_i)_y / ((d)_y y! prod (c_i)_y).
inline Side hyper_f(const HValue& a, const HValue& b, const HValue& d, const std::vector<HValue>& c,
                    const std::vector<long>& m, Bits bits) {
  TermSpec t = classical_term(1, bits);
  const Affine y = yk(1, 0);
  t.num(a, y).num(b, y).den(d, y).den(whole(bits, 1), y);
  for (size_t i = 0; i < c.size(); ++i) t.num(c[i] + m[i], y).den(c[i], y);
  return Side{classical_pre(bits), Series{std::move(t), Domain::orthant(1)}};
}

/// Gauss-type ratio Gamma(d) Gamma(d-a-b-s) / (Gamma(d-a) Gamma(d-b)).
inline void gauss_ratio(Prefactor& pre, const HValue& a, const HValue& b, const HValue& d, long s) {
  pre.gamma(d).gamma(d - a - b - s).gamma_den(d - a).gamma_den(d - b);
}

inline std::vector<SchemaEntry> hyper_schema(bool with_d) {
  std::vector<SchemaEntry> s = {integer("p"), scalar("a"), scalar("b"), vec("c", "p"), ivec("m", "p")};
  if (with_d) s.push_back(scalar("d"));
  return s;
}

/// p, c, m, and a = -M (terminating, M >= |m| + lift) or the given fallback.
inline void draw_hyper_common(Draw& dr, ParamSet& ps) {
  const auto& cfg = dr.cfg();
  long p = dr.dim("p", cfg.p, 0, 3);
  ps.set_int("p", p);
  ps.set_vec("c", cpar(dr, static_cast<size_t>(p)));
  ps.set_ints("m", dr.mvec(static_cast<size_t>(p)));
}

inline long terminating_order(Draw& dr, long M) { return dr.has("M") ? dr.fixed("M", 1) : dr.integer(std::max(1L, M), M + 2); }

// ---- Karlsson-Minton -------------------------------------------------------------

inline IdentityDescriptor make_cl_km() {
  IdentityDescriptor d;
  d.id = "cl_km";
  d.mode = Mode::classical;
  d.title = "Karlsson-Minton summation of an (r+2)F(r+1) series at unit argument";
  d.schema = hyper_schema(false);
  d.constraints = {real_part("Re(a + |m|) < 1",
                             [](const ParamSet& ps) { return -(ps.scalar("a") + ps.int_sum("m")); },
                             [](const ParamSet&) { return -1.0; }),
                   nonneg("m_i >= 0", {"m"})};
  d.dependent = "a (a = -M with M >= |m| when terminating)";
  d.lhs = [](const ParamSet& ps) {
    const HValue& b = ps.scalar("b");
    return hyper_f(ps.scalar("a"), b, b + 1, ps.vec("c"), ps.ints("m"), ps.bits());
  };
  d.rhs = [](const ParamSet& ps) {
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b");
    const auto& c = ps.vec("c");
    const auto& m = ps.ints("m");
    Prefactor pre = classical_pre(ps.bits());
    pre.gamma(b + 1).gamma(1 - a).gamma_den(b - a + 1);
    for (size_t i = 0; i < c.size(); ++i) pre.poch(c[i] - b, m[i]).poch_den(c[i], m[i]);
    return Side{std::move(pre), std::nullopt};
  };
  d.draw = [](Draw& dr) {
    ParamSet ps(dr.bits());
    draw_hyper_common(dr, ps);
    const long M = total(ps.ints("m"));
    if (dr.cfg().terminating) {
      ps.set("a", whole(dr.bits(), -terminating_order(dr, M)));
    } else {
      ps.set("a", 1 - M - cpar(dr));
    }
    ps.set("b", cpar(dr));
    return ps;
  };
  d.degenerations = {{"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}, {"a=-1", {{"M", 1}, {"p", 1}, {"m_zero", 1}}}};
  return d;
}

/// Gamma(d)Gamma(d-a-b)/(Gamma(d-a)Gamma(d-b)) prod (c_i+1-d)_{m_i}/(c_i)_{m_i}
/// (a)_{|m|}/(1+a+b-d)_{|m|} times the U(r) box sum.
inline Side kmg_rhs(const ParamSet& ps) {
  const Bits bits = ps.bits();
  const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &dd = ps.scalar("d");
  const auto& c = ps.vec("c");
  const auto& m = ps.ints("m");
  const size_t p = c.size();
  const long M = total(m);
  Prefactor pre = classical_pre(bits);
  gauss_ratio(pre, a, b, dd, 0);
  for (size_t i = 0; i < p; ++i) pre.poch(c[i] - dd + 1, m[i]).poch_den(c[i], m[i]);
  pre.poch(a, M).poch_den(a + b - dd + 1, M);
  TermSpec t = classical_term(p, bits);
  box_group_classical(t, c, m);
  t.num(b - dd + 1, ytot(p)).den(1 - M - a, ytot(p));
  for (size_t i = 0; i < p; ++i) t.num(c[i] - a, yk(p, i)).den(c[i] - dd + 1, yk(p, i));
  return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
}

inline Side kmg_lhs(const ParamSet& ps) {
  return hyper_f(ps.scalar("a"), ps.scalar("b"), ps.scalar("d"), ps.vec("c"), ps.ints("m"), ps.bits());
}

inline Constraint kmg_constraint() {
  return real_part("Re(a + |m| + b - d) < 0",
                   [](const ParamSet& ps) {
                     return ps.scalar("d") - ps.scalar("a") - ps.scalar("b") - ps.int_sum("m");
                   },
                   [](const ParamSet&) { return 0.0; });
}

inline ParamSet draw_kmg(Draw& dr) {
  ParamSet ps(dr.bits());
  draw_hyper_common(dr, ps);
  const long M = total(ps.ints("m"));
  HValue b = cpar(dr);
  HValue a(dr.bits());
  if (dr.cfg().terminating) {
    a = whole(dr.bits(), -terminating_order(dr, M));
  }
  HValue dd = dr.has("d_eq_b1") ? b + 1 : b + M + a + cpar(dr);
  if (!dr.cfg().terminating) {
    if (dr.has("d_eq_b1")) {
      a = dd - b - M - cpar(dr);
    } else {
      dd = b + cpar(dr) + 1;
      a = dd - b - M - cpar(dr);
    }
  }
  ps.set("a", std::move(a));
  ps.set("b", std::move(b));
  ps.set("d", std::move(dd));
  return ps;
}

inline IdentityDescriptor make_cl_kmg() {
  IdentityDescriptor d;
  d.id = "cl_kmg";
  d.mode = Mode::classical;
  d.title = "Karlsson-Minton type (r+2)F(r+1) with free lower parameter d as a U(r) finite sum";
  d.schema = hyper_schema(true);
  d.constraints = {kmg_constraint(), nonneg("m_i >= 0", {"m"})};
  d.dependent = "d (placed so that Re(d - a - b - |m|) is in the configured band); a = -M when terminating";
  d.lhs = kmg_lhs;
  d.rhs = kmg_rhs;
  d.draw = draw_kmg;
  d.degenerations = {{"d=b+1", {{"d_eq_b1", 1}}}, {"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}};
  return d;
}

inline IdentityDescriptor make_cl_us() {
  IdentityDescriptor d;
  d.id = "cl_us";
  d.mode = Mode::classical;
  d.title = "Alternative finite-sum expression for the Karlsson-Minton type (r+2)F(r+1)";
  d.schema = hyper_schema(true);
  d.constraints = {kmg_constraint(), nonneg("m_i >= 0", {"m"})};
  d.dependent = "d (placed so that Re(d - a - b - |m|) is in the configured band); a = -M when terminating";
  d.lhs = kmg_lhs;
  d.rhs = [](const ParamSet& ps) {
    const Bits bits = ps.bits();
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &dd = ps.scalar("d");
    const auto& c = ps.vec("c");
    const auto& m = ps.ints("m");
    const size_t p = c.size();
    Prefactor pre = classical_pre(bits);
    gauss_ratio(pre, a, b, dd, 0);
    TermSpec t = classical_term(p, bits);
    const Affine tot = ytot(p);
    t.num(a, tot).num(b, tot).den(a + b - dd + 1, tot);
    if (p > 0) t.den(c[p - 1], tot);
    for (size_t i = 0; i < p; ++i) t.num(whole(bits, -m[i]), yk(p, i)).den(whole(bits, 1), yk(p, i));
    for (size_t i = 0; i + 1 < p; ++i) t.num(c[i + 1] + m[i + 1], Affine::prefix(p, i + 1)).den(c[i], Affine::prefix(p, i + 1));
    return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
  };
  d.draw = draw_kmg;
  d.degenerations = {{"d=b+1", {{"d_eq_b1", 1}}}, {"m=0", {{"m_zero", 1}}}, {"p=1", {{"p", 1}}}};
  return d;
}

inline IdentityDescriptor make_cl_bi() {
  IdentityDescriptor d;
  d.id = "cl_bi";
  d.mode = Mode::classical;
  d.title = "Second U(r) finite-sum form of the Karlsson-Minton type (r+2)F(r+1)";
  d.schema = hyper_schema(true);
  d.constraints = {real_part("Re(d - a - b) > |m|",
                             [](const ParamSet& ps) { return ps.scalar("d") - ps.scalar("a") - ps.scalar("b"); },
                             [](const ParamSet& ps) { return static_cast<double>(ps.int_sum("m")); }),
                   nonneg("m_i >= 0", {"m"})};
  d.dependent = "d (placed so that Re(d - a - b - |m|) is in the configured band); a = -M when terminating";
  d.lhs = kmg_lhs;
  d.rhs = [](const ParamSet& ps) {
    const Bits bits = ps.bits();
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &dd = ps.scalar("d");
    const auto& c = ps.vec("c");
    const auto& m = ps.ints("m");
    const size_t p = c.size();
    const long M = total(m);
    Prefactor pre = classical_pre(bits);
    pre.power(whole(bits, -1), M);
    gauss_ratio(pre, a, b, dd, M);
    for (size_t i = 0; i < p; ++i) pre.poch(c[i] - dd + 1, m[i]);
    TermSpec t = classical_term(p, bits);
    box_group_classical(t, c, m);
    for (size_t i = 0; i < p; ++i) {
      t.num(c[i] - a, yk(p, i)).num(c[i] - b, yk(p, i)).den(c[i], yk(p, i)).den(c[i] - dd + 1, yk(p, i));
    }
    return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
  };
  d.draw = [](Draw& dr) {
    ParamSet ps(dr.bits());
    draw_hyper_common(dr, ps);
    const long M = total(ps.ints("m"));
    HValue a = dr.cfg().terminating ? whole(dr.bits(), -terminating_order(dr, 1)) : cpar(dr);
    HValue b = cpar(dr);
    HValue dd = a + b + M + cpar(dr);
    ps.set("a", std::move(a));
    ps.set("b", std::move(b));
    ps.set("d", std::move(dd));
    return ps;
  };
  d.degenerations = {{"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}, {"p=1", {{"p", 1}}}};
  return d;
}

inline IdentityDescriptor make_cl_3h3() {
  IdentityDescriptor d;
  d.id = "cl_3h3";
  d.mode = Mode::classical;
  d.title = "Bilateral Karlsson-Minton type series with two free lower parameters";
  d.schema = {integer("p"), scalar("a"), scalar("b"), scalar("d"), scalar("e"), vec("c", "p"), ivec("m", "p")};
  d.constraints = {real_part("Re(d + e - a - b) > |m| + 1",
                             [](const ParamSet& ps) {
                               return ps.scalar("d") + ps.scalar("e") - ps.scalar("a") - ps.scalar("b");
                             },
                             [](const ParamSet& ps) { return static_cast<double>(ps.int_sum("m") + 1); }),
                   nonneg("m_i >= 0", {"m"})};
  d.dependent = "e (placed so that Re(d + e - a - b - |m| - 1) is in the configured band); a = -J and d = 1 + K when terminating";
  d.lhs = [](const ParamSet& ps) {
    const Bits bits = ps.bits();
    const auto& c = ps.vec("c");
    const auto& m = ps.ints("m");
    TermSpec t = classical_term(1, bits);
    const Affine y = yk(1, 0);
    t.num(ps.scalar("a"), y).num(ps.scalar("b"), y).den(ps.scalar("d"), y).den(ps.scalar("e"), y);
    for (size_t i = 0; i < c.size(); ++i) t.num(c[i] + m[i], y).den(c[i], y);
    return Side{classical_pre(bits), Series{std::move(t), Domain::lattice(1)}};
  };
  d.rhs = [](const ParamSet& ps) {
    const Bits bits = ps.bits();
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &dd = ps.scalar("d"), &e = ps.scalar("e");
    const auto& c = ps.vec("c");
    const auto& m = ps.ints("m");
    const size_t p = c.size();
    const long M = total(m);
    Prefactor pre = classical_pre(bits);
    pre.power(whole(bits, -1), M);
    for (size_t i = 0; i < p; ++i) pre.poch(c[i] - dd + 1, m[i]).poch(c[i] - e + 1, m[i]).poch_den(c[i], m[i]);
    pre.gamma(dd + e - a - b - M - 1).gamma(1 - a).gamma(1 - b).gamma(dd).gamma(e);
    pre.gamma_den(dd - a).gamma_den(dd - b).gamma_den(e - a).gamma_den(e - b);
    TermSpec t = classical_term(p, bits);
    box_group_classical(t, c, m);
    for (size_t i = 0; i < p; ++i) {
      t.num(c[i] - a, yk(p, i)).num(c[i] - b, yk(p, i)).den(c[i] - dd + 1, yk(p, i)).den(c[i] - e + 1, yk(p, i));
    }
    return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
  };
  d.draw = [](Draw& dr) {
    ParamSet ps(dr.bits());
    draw_hyper_common(dr, ps);
    const long M = total(ps.ints("m"));
    HValue a(dr.bits()), dd(dr.bits());
    if (dr.cfg().terminating) {
      a = whole(dr.bits(), -terminating_order(dr, 1));
      dd = whole(dr.bits(), 1 + dr.integer(0, 2));
    } else {
      a = cpar(dr);
      dd = cpar(dr);
    }
    HValue b = cpar(dr);
    HValue e = a + b + M + 1 - dd + cpar(dr);
    ps.set("a", std::move(a));
    ps.set("b", std::move(b));
    ps.set("d", std::move(dd));
    ps.set("e", std::move(e));
    return ps;
  };
  d.degenerations = {{"p=1", {{"p", 1}}}, {"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}};
  return d;
}

// ---- U(n) classical sums ----------------------------------------------------------

/// Terminating choice a_k = -J_k - z_k: the series is cut at y_k <= J_k.
inline std::vector<HValue> cut_above(const std::vector<HValue>& z, const std::vector<long>& J) {
  std::vector<HValue> a;
  for (size_t k = 0; k < z.size(); ++k) a.push_back(-(z[k] + J[k]));
  return a;
}
/// b_k = j_k - z_k with j_k >= 1: the series is cut at y_k >= 1 - j_k.
inline std::vector<HValue> cut_below(const std::vector<HValue>& z, const std::vector<long>& j) {
  std::vector<HValue> b;
  for (size_t k = 0; k < z.size(); ++k) b.push_back(j[k] - z[k]);
  return b;
}
inline std::vector<long> orders(Draw& dr, size_t len, long lo, long hi) {
  std::vector<long> v(len);
  for (auto& x : v) x = dr.integer(lo, hi);
  return v;
}

inline HValue vsum(const ParamSet& ps, const std::string& name) { return total(ps.vec(name), ps.bits()); }

/// Gustafson's gamma product prod_{i,k} Gamma(1-a_k-z_i) Gamma(b_i+z_k) / (Gamma(b_i-a_k) Gamma(1+z_k-z_i)).
inline void classical_gustafson(Prefactor& pre, const std::vector<HValue>& a, const std::vector<HValue>& b,
                                const std::vector<HValue>& z) {
  const size_t n = z.size();
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k < n; ++k) {
      pre.gamma(1 - a[k] - z[i]).gamma(b[i] + z[k]).gamma_den(b[i] - a[k]).gamma_den(1 + z[k] - z[i]);
    }
  }
}

/// prod_{i,k<=n+1} 1/Gamma(b_i - a_k), prod_{i,k<=n} 1/Gamma(1+z_k-z_i),
/// prod_{k<=n, i<=n+1} Gamma(1-a_i-z_k) Gamma(b_i+z_k).
inline void classical_psi(Prefactor& pre, const std::vector<HValue>& a, const std::vector<HValue>& b,
                          const std::vector<HValue>& z) {
  for (const auto& bi : b) {
    for (const auto& ak : a) pre.gamma_den(bi - ak);
  }
  for (const auto& zi : z) {
    for (const auto& zk : z) pre.gamma_den(1 + zk - zi);
  }
  for (const auto& zk : z) {
    for (size_t i = 0; i < a.size(); ++i) pre.gamma(1 - a[i] - zk).gamma(b[i] + zk);
  }
}

inline Side classical_km_side(const ParamSet& ps, Domain dom) {
  const auto& z = ps.vec("z");
  TermSpec t = classical_term(z.size(), ps.bits());
  t.vandermonde(z);
  if (ps.has_vec("c")) km_group_classical(t, ps.vec("c"), ps.ints("m"), z);
  ab_group_classical(t, ps.vec("a"), ps.vec("b"), z);
  return Side{classical_pre(ps.bits()), Series{std::move(t), std::move(dom)}};
}

inline Constraint excess(const std::string& expr, long shift, bool with_m) {
  return real_part(expr, [](const ParamSet& ps) { return vsum(ps, "b") - vsum(ps, "a"); },
                   [shift, with_m](const ParamSet& ps) {
                     return static_cast<double>(ps.integer("n") + shift + (with_m ? ps.int_sum("m") : 0));
                   });
}

/// Lifts b so that Re(|b| - |a|) exceeds bound by a drawn amount.
inline void lift_excess(Draw& dr, std::vector<HValue>& b, const std::vector<HValue>& a, double bound) {
  const Bits bits = dr.bits();
  double gap = (total(b, bits) - total(a, bits)).re().to_double() - bound;
  if (gap > 0) return;
  b.back() += cpar(dr) + static_cast<long>(std::ceil(-gap));
}

inline IdentityDescriptor make_cl_5h5() {
  IdentityDescriptor d;
  d.id = "cl_5h5";
  d.mode = Mode::classical;
  d.title = "Classical U(n) hyperplane sum with gamma-function evaluation";
  d.schema = {integer("n"), vec("a", "n"), vec("b", "n"), vec("z", "n")};
  d.constraints = {excess("Re(|b| - |a|) > n - 1", -1, false)};
  d.dependent = "a_k = -J_k - z_k when terminating; b lifted to satisfy the excess condition";
  d.lhs = [](const ParamSet& ps) { return classical_km_side(ps, Domain::hyperplane(ps.vec("z").size(), 0)); };
  d.rhs = [](const ParamSet& ps) {
    const auto &a = ps.vec("a"), &b = ps.vec("b"), &z = ps.vec("z");
    const long n = ps.integer("n");
    const HValue A = vsum(ps, "a"), B = vsum(ps, "b"), Z = vsum(ps, "z");
    Prefactor pre = classical_pre(ps.bits());
    pre.gamma(1 + B - A - n).gamma_den(1 - A - Z).gamma_den(1 + B + Z - n);
    classical_gustafson(pre, a, b, z);
    return Side{std::move(pre), std::nullopt};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    long n = dr.dim("n", cfg.n, 1, 3);
    ps.set_int("n", n);
    auto z = cpar(dr, static_cast<size_t>(n));
    auto a = cfg.terminating ? cut_above(z, orders(dr, static_cast<size_t>(n), 0, 3)) : cpar(dr, static_cast<size_t>(n));
    auto b = cpar(dr, static_cast<size_t>(n));
    lift_excess(dr, b, a, static_cast<double>(n - 1));
    ps.set_vec("a", std::move(a));
    ps.set_vec("b", std::move(b));
    ps.set_vec("z", std::move(z));
    return ps;
  };
  d.degenerations = {{"n=1", {{"n", 1}}}, {"n=2", {{"n", 2}}}};
  return d;
}

inline IdentityDescriptor make_cl_2h2() {
  IdentityDescriptor d;
  d.id = "cl_2h2";
  d.mode = Mode::classical;
  d.title = "Classical U(n) full-lattice sum with n+1 parameter pairs";
  d.schema = {integer("n"), vec("a", "n+1"), vec("b", "n+1"), vec("z", "n")};
  d.constraints = {excess("Re(|b| - |a|) > n", 0, false)};
  d.dependent = "a_k = -J_k - z_k and b_k = j_k - z_k (k <= n) when terminating; b lifted to satisfy the excess condition";
  d.lhs = [](const ParamSet& ps) { return classical_km_side(ps, Domain::lattice(ps.vec("z").size())); };
  d.rhs = [](const ParamSet& ps) {
    const long n = ps.integer("n");
    Prefactor pre = classical_pre(ps.bits());
    pre.gamma(vsum(ps, "b") - vsum(ps, "a") - n);
    classical_psi(pre, ps.vec("a"), ps.vec("b"), ps.vec("z"));
    return Side{std::move(pre), std::nullopt};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    long n = dr.dim("n", cfg.n, 1, 3);
    ps.set_int("n", n);
    const auto un = static_cast<size_t>(n);
    auto z = cpar(dr, un);
    std::vector<HValue> a, b;
    if (cfg.terminating) {
      a = cut_above(z, orders(dr, un, 0, 2));
      b = cut_below(z, orders(dr, un, 1, 3));
      a.push_back(cpar(dr));
      b.push_back(cpar(dr));
    } else {
      a = cpar(dr, un + 1);
      b = cpar(dr, un + 1);
    }
    lift_excess(dr, b, a, static_cast<double>(n));
    ps.set_vec("a", std::move(a));
    ps.set_vec("b", std::move(b));
    ps.set_vec("z", std::move(z));
    return ps;
  };
  d.degenerations = {{"n=1", {{"n", 1}}}, {"n=2", {{"n", 2}}}};
  return d;
}

inline IdentityDescriptor make_cl_thm_a() {
  IdentityDescriptor d;
  d.id = "cl_thm_a";
  d.mode = Mode::classical;
  d.title = "Classical reduction of a U(n) Karlsson-Minton type hyperplane series";
  d.schema = {integer("n"), integer("p"), vec("a", "n"), vec("b", "n"), vec("z", "n"), vec("c", "p"), ivec("m", "p")};
  d.constraints = {excess("Re(|b| - |a|) > n + |m| - 1", -1, true), nonneg("m_i >= 0", {"m"})};
  d.dependent = "a_k = -J_k - z_k with |J| >= |m| when terminating; b lifted to satisfy the excess condition";
  d.lhs = [](const ParamSet& ps) { return classical_km_side(ps, Domain::hyperplane(ps.vec("z").size(), 0)); };
  d.rhs = [](const ParamSet& ps) {
    const Bits bits = ps.bits();
    const auto &a = ps.vec("a"), &b = ps.vec("b"), &z = ps.vec("z"), &c = ps.vec("c");
    const auto& m = ps.ints("m");
    const long n = ps.integer("n"), M = total(m);
    const size_t p = c.size();
    const HValue A = vsum(ps, "a"), B = vsum(ps, "b"), Z = vsum(ps, "z");
    Prefactor pre = classical_pre(bits);
    pre.gamma(1 + B - A - M - n).gamma_den(1 - A - Z - M).gamma_den(1 + B + Z - n);
    classical_gustafson(pre, a, b, z);
    for (size_t k = 0; k < z.size(); ++k) {
      for (size_t i = 0; i < p; ++i) pre.poch(1 + c[i] - b[k], m[i]).poch_den(c[i] + z[k], m[i]);
    }
    TermSpec t = classical_term(p, bits);
    box_group_classical(t, c, m);
    t.num(n - B - Z, ytot(p)).den(1 - A - Z - M, ytot(p));
    for (size_t k = 0; k < z.size(); ++k) {
      for (size_t i = 0; i < p; ++i) t.num(c[i] - a[k], yk(p, i)).den(1 + c[i] - b[k], yk(p, i));
    }
    return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    long n = dr.dim("n", cfg.n, 1, 3), p = dr.dim("p", cfg.p, 0, 3);
    ps.set_int("n", n);
    ps.set_int("p", p);
    const auto un = static_cast<size_t>(n);
    ps.set_vec("c", cpar(dr, static_cast<size_t>(p)));
    ps.set_ints("m", dr.mvec(static_cast<size_t>(p)));
    const long M = total(ps.ints("m"));
    auto z = cpar(dr, un);
    std::vector<HValue> a;
    if (cfg.terminating) {
      auto J = orders(dr, un, 0, 2);
      // |J| >= |m| keeps 1 - |a| - |z| - |m| off the non-positive integers
      J[0] += std::max(0L, M - total(J));
      a = cut_above(z, J);
    } else {
      a = cpar(dr, un);
    }
    auto b = cpar(dr, un);
    lift_excess(dr, b, a, static_cast<double>(n + M - 1));
    ps.set_vec("a", std::move(a));
    ps.set_vec("b", std::move(b));
    ps.set_vec("z", std::move(z));
    return ps;
  };
  d.degenerations = {{"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}, {"n=1", {{"n", 1}}}};
  return d;
}

inline IdentityDescriptor make_cl_thm_b() {
  IdentityDescriptor d;
  d.id = "cl_thm_b";
  d.mode = Mode::classical;
  d.title = "Classical reduction of a U(n) Karlsson-Minton type full-lattice series";
  d.schema = {integer("n"), integer("p"), vec("a", "n+1"), vec("b", "n+1"), vec("z", "n"), vec("c", "p"), ivec("m", "p")};
  d.constraints = {excess("Re(|b| - |a|) > n + |m|", 0, true), nonneg("m_i >= 0", {"m"})};
  d.dependent = "a_k = -J_k - z_k and b_k = j_k - z_k (k <= n) when terminating; b lifted to satisfy the excess condition";
  d.lhs = [](const ParamSet& ps) { return classical_km_side(ps, Domain::lattice(ps.vec("z").size())); };
  d.rhs = [](const ParamSet& ps) {
    const Bits bits = ps.bits();
    const auto &a = ps.vec("a"), &b = ps.vec("b"), &z = ps.vec("z"), &c = ps.vec("c");
    const auto& m = ps.ints("m");
    const long n = ps.integer("n"), M = total(m);
    const size_t p = c.size();
    Prefactor pre = classical_pre(bits);
    pre.power(whole(bits, -1), M).gamma(vsum(ps, "b") - vsum(ps, "a") - M - n);
    classical_psi(pre, a, b, z);
    for (size_t i = 0; i < p; ++i) {
      for (const auto& bk : b) pre.poch(1 + c[i] - bk, m[i]);
      for (const auto& zk : z) pre.poch_den(c[i] + zk, m[i]);
    }
    TermSpec t = classical_term(p, bits);
    box_group_classical(t, c, m);
    for (size_t k = 0; k < a.size(); ++k) {
      for (size_t i = 0; i < p; ++i) t.num(c[i] - a[k], yk(p, i)).den(1 + c[i] - b[k], yk(p, i));
    }
    return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    long n = dr.dim("n", cfg.n, 1, 3), p = dr.dim("p", cfg.p, 0, 3);
    ps.set_int("n", n);
    ps.set_int("p", p);
    const auto un = static_cast<size_t>(n);
    ps.set_vec("c", cpar(dr, static_cast<size_t>(p)));
    ps.set_ints("m", dr.mvec(static_cast<size_t>(p)));
    const long M = total(ps.ints("m"));
    auto z = cpar(dr, un);
    std::vector<HValue> a, b;
    if (cfg.terminating) {
      a = cut_above(z, orders(dr, un, 0, 2));
      b = cut_below(z, orders(dr, un, 1, 3));
      a.push_back(cpar(dr));
      b.push_back(cpar(dr));
    } else {
      a = cpar(dr, un + 1);
      b = cpar(dr, un + 1);
    }
    lift_excess(dr, b, a, static_cast<double>(n + M));
    ps.set_vec("a", std::move(a));
    ps.set_vec("b", std::move(b));
    ps.set_vec("z", std::move(z));
    return ps;
  };
  d.degenerations = {{"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}, {"n=1", {{"n", 1}}}};
  return d;
}

}  // namespace kmv::build
