#pragma once

// Well-poised forms: the n-dimensional lattice rewrite, its unilateral
// specialization, the one-variable very-well-poised bilateral series and
// the unilateral limits.

#include "kmv/identities/core.hpp"

namespace kmv::build {

/// Multiplies each entry of up by s and divides each entry of down by s,
/// with s chosen so that an expression equal to current (and homogeneous
/// of degree +1 in up, -1 in down) becomes target.
inline void place(std::vector<HValue*> up, std::vector<HValue*> down, const HValue& current, const HValue& target) {
  const long k = static_cast<long>(up.size() + down.size());
  if (k == 0) throw Error(ErrorCode::invalid_argument, "nothing to rescale");
  HValue s = root(target / current, k);
  for (auto* x : up) *x *= s;
  for (auto* x : down) *x /= s;
}

inline std::vector<HValue*> ptrs(std::vector<HValue>& v) {
  std::vector<HValue*> out;
  for (auto& x : v) out.push_back(&x);
  return out;
}
inline std::vector<HValue*> join(std::vector<HValue*> a, const std::vector<HValue*>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// Box sum over x <= m with nodes 1/f shared by the well-poised identities:
/// Delta(q^x/f)/Delta(1/f) q^{|x|} prod_{i,k} (q^{-m_k} f_k/f_i)_{x_i} / (q f_k/f_i)_{x_i}.
inline TermSpec inverse_node_box(const std::vector<HValue>& f, const std::vector<long>& m, const QBase& q) {
  const size_t p = f.size();
  const Bits bits = q.bits();
  TermSpec t(p, Mode::q, q, bits);
  std::vector<HValue> nodes;
  for (const auto& fi : f) nodes.push_back(fi.reciprocal());
  t.vandermonde(nodes);
  t.power(q.value(), ytot(p));
  for (size_t i = 0; i < p; ++i) {
    for (size_t k = 0; k < p; ++k) {
      HValue r = f[k] / f[i];
      t.num(q.pow(-m[k]) * r, yk(p, i)).den(q.value() * r, yk(p, i));
    }
  }
  return t;
}

// ---- n-dimensional lattice form -------------------------------------------

inline HValue c1_modulus(const ParamSet& ps) {
  const QBase& q = ps.q();
  const long n = ps.integer("n");
  const HValue& a = ps.scalar("a");
  return pow(a, 1 + n) * q.pow(1 - ps.int_sum("m")) /
         (ps.scalar("b") * ps.product("c") * ps.scalar("d") * ps.product("e"));
}

inline IdentityDescriptor make_cor_c1() {
  IdentityDescriptor d;
  d.id = "cor_c1";
  d.title = "Lattice rewrite of the reduction formula with a well-poised factor";
  d.schema = {integer("n"), integer("p"), scalar("a"), scalar("b"), scalar("d"), vec("z", "n"),
              vec("c", "n"),  vec("e", "n"),  vec("f", "p"),  ivec("m", "p")};
  d.constraints = {modulus("|a^{1+n} q^{1-|m|} / bCdE| < 1", c1_modulus), nonneg("m_i >= 0", {"m"})};
  d.dependent = "b, c, d, e (scaled jointly to place the modulus)";
  d.lhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const HValue& Q = q.value();
    const auto &z = ps.vec("z"), &c = ps.vec("c"), &e = ps.vec("e"), &f = ps.vec("f");
    const auto& m = ps.ints("m");
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &dd = ps.scalar("d");
    const size_t n = z.size();
    TermSpec t(n, Mode::q, q, ps.bits());
    t.vandermonde(z);
    const Affine tot = ytot(n);
    for (size_t k = 0; k < n; ++k) t.well_poised(a * z[k], yk(n, k) + tot);
    t.num(b, tot).den(a * Q / dd, tot);
    for (size_t k = 0; k < n; ++k) t.num(c[k] * z[k], tot).den(a * Q * z[k] / e[k], tot);
    for (size_t i = 0; i < f.size(); ++i) t.num(f[i], tot).den(q.pow(-m[i]) * f[i], tot);
    for (size_t k = 0; k < n; ++k) {
      t.num(dd * z[k], yk(n, k)).den(a * Q * z[k] / b, yk(n, k));
      for (size_t i = 0; i < n; ++i) t.num(e[i] * z[k] / z[i], yk(n, k)).den(a * Q * z[k] / (c[i] * z[i]), yk(n, k));
      for (size_t i = 0; i < f.size(); ++i) {
        t.num(a * q.pow(1 + m[i]) * z[k] / f[i], yk(n, k)).den(a * Q * z[k] / f[i], yk(n, k));
      }
    }
    t.power(c1_modulus(ps), tot);
    return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), Domain::lattice(n)}};
  };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const HValue& Q = q.value();
    const Bits bits = ps.bits();
    const auto &z = ps.vec("z"), &c = ps.vec("c"), &e = ps.vec("e"), &f = ps.vec("f");
    const auto& m = ps.ints("m");
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &dd = ps.scalar("d");
    const size_t n = z.size(), p = f.size();
    const long M = total(m);
    const HValue C = prod(c, bits), E = prod(e, bits);
    Prefactor pre(Mode::q, q, bits);
    pre.qinf(a * q.pow(1 - M) / (dd * E)).qinf(pow(a, static_cast<long>(n)) * Q / (b * C)).qinf(a * Q / (b * dd));
    pre.qinf_den(c1_modulus(ps)).qinf_den(a * Q / dd).qinf_den(Q / b);
    for (size_t i = 0; i < n; ++i) {
      for (size_t k = 0; k < n; ++k) {
        pre.qinf(a * Q * z[k] / (e[k] * c[i] * z[i])).qinf(Q * z[k] / z[i]);
        pre.qinf_den(Q * z[k] / (e[k] * z[i])).qinf_den(a * Q * z[k] / (c[i] * z[i]));
      }
    }
    for (size_t k = 0; k < n; ++k) {
      pre.qinf(a * Q / (dd * c[k] * z[k])).qinf(Q / (a * z[k])).qinf(a * Q * z[k] / (b * e[k])).qinf(a * Q * z[k]);
      pre.qinf_den(Q / (c[k] * z[k])).qinf_den(Q / (dd * z[k])).qinf_den(a * Q * z[k] / b).qinf_den(a * Q * z[k] / e[k]);
      for (size_t i = 0; i < p; ++i) {
        pre.poch(q.pow(-m[i]) * f[i] / (c[k] * z[k]), m[i]).poch_den(q.pow(-m[i]) * f[i] / (a * z[k]), m[i]);
      }
    }
    for (size_t i = 0; i < p; ++i) pre.poch(q.pow(-m[i]) * f[i] / b, m[i]).poch_den(q.pow(-m[i]) * f[i], m[i]);

    TermSpec t = inverse_node_box(f, m, q);
    const Affine tot = ytot(p);
    t.num(b * C / pow(a, static_cast<long>(n)), tot).den(a * q.pow(1 - M) / (dd * E), tot);
    for (size_t i = 0; i < p; ++i) {
      for (size_t k = 0; k < n; ++k) t.num(a * Q * z[k] / (e[k] * f[i]), yk(p, i)).den(Q * c[k] * z[k] / f[i], yk(p, i));
      t.num(a * Q / (dd * f[i]), yk(p, i)).den(Q * b / f[i], yk(p, i));
    }
    return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    long n = dr.dim("n", cfg.n, 1, 2), p = dr.dim("p", cfg.p, 0, 3);
    ps.set_int("n", n);
    ps.set_int("p", p);
    ps.set_vec("z", dr.free(static_cast<size_t>(n)));
    ps.set_vec("f", dr.free(static_cast<size_t>(p)));
    ps.set_ints("m", dr.mvec(static_cast<size_t>(p)));
    ps.set("a", dr.free());
    HValue b = dr.free(), dd = dr.free();
    auto c = dr.free(static_cast<size_t>(n));
    auto e = dr.free(static_cast<size_t>(n));
    ps.set("b", b);
    ps.set("d", dd);
    ps.set_vec("c", c);
    ps.set_vec("e", e);
    HValue cur = c1_modulus(ps);
    place({}, join(join({&b, &dd}, ptrs(c)), ptrs(e)), cur, dr.target());
    ps.set("b", std::move(b));
    ps.set("d", std::move(dd));
    ps.set_vec("c", std::move(c));
    ps.set_vec("e", std::move(e));
    return ps;
  };
  d.degenerations = {{"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}, {"n=1", {{"n", 1}}}};
  return d;
}

// ---- unilateral n-dimensional form ------------------------------------------

inline HValue pk_modulus(const ParamSet& ps) {
  return ps.scalar("a") * ps.q().pow(1 - ps.int_sum("m")) / (ps.scalar("b") * ps.scalar("d") * ps.product("e"));
}

inline IdentityDescriptor make_cor_pk() {
  IdentityDescriptor d;
  d.id = "cor_pk";
  d.title = "Unilateral U(n) well-poised series reduced to a finite sum";
  d.schema = {integer("n"), integer("p"), scalar("a"),  scalar("b"),  scalar("d"),
              vec("z", "n"), vec("e", "n"), vec("f", "p"), ivec("m", "p")};
  d.constraints = {modulus("|a q^{1-|m|} / bdE| < 1", pk_modulus), nonneg("m_i >= 0", {"m"})};
  d.dependent = "b, d, e (scaled jointly to place the modulus)";
  d.lhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const HValue& Q = q.value();
    const auto &z = ps.vec("z"), &e = ps.vec("e"), &f = ps.vec("f");
    const auto& m = ps.ints("m");
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &dd = ps.scalar("d");
    const size_t n = z.size();
    TermSpec t(n, Mode::q, q, ps.bits());
    t.vandermonde(z);
    const Affine tot = ytot(n);
    for (size_t k = 0; k < n; ++k) t.well_poised(a * z[k], yk(n, k) + tot);
    t.num(b, tot).den(a * Q / dd, tot);
    for (size_t k = 0; k < n; ++k) t.num(a * z[k], tot).den(a * Q * z[k] / e[k], tot);
    for (size_t i = 0; i < f.size(); ++i) t.num(f[i], tot).den(q.pow(-m[i]) * f[i], tot);
    for (size_t k = 0; k < n; ++k) {
      t.num(dd * z[k], yk(n, k)).den(a * Q * z[k] / b, yk(n, k));
      for (size_t i = 0; i < n; ++i) t.num(e[i] * z[k] / z[i], yk(n, k)).den(Q * z[k] / z[i], yk(n, k));
      for (size_t i = 0; i < f.size(); ++i) {
        t.num(a * q.pow(1 + m[i]) * z[k] / f[i], yk(n, k)).den(a * Q * z[k] / f[i], yk(n, k));
      }
    }
    t.power(pk_modulus(ps), tot);
    return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), Domain::orthant(n)}};
  };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const HValue& Q = q.value();
    const Bits bits = ps.bits();
    const auto &z = ps.vec("z"), &e = ps.vec("e"), &f = ps.vec("f");
    const auto& m = ps.ints("m");
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &dd = ps.scalar("d");
    const size_t n = z.size(), p = f.size();
    const long M = total(m);
    const HValue E = prod(e, bits);
    Prefactor pre(Mode::q, q, bits);
    pre.qinf(a * q.pow(1 - M) / (dd * E)).qinf(a * Q / (b * dd));
    pre.qinf_den(pk_modulus(ps)).qinf_den(a * Q / dd);
    for (size_t k = 0; k < n; ++k) {
      pre.qinf(a * Q * z[k] / (b * e[k])).qinf(a * Q * z[k]);
      pre.qinf_den(a * Q * z[k] / b).qinf_den(a * Q * z[k] / e[k]);
    }
    for (size_t i = 0; i < p; ++i) pre.poch(q.pow(-m[i]) * f[i] / b, m[i]).poch_den(q.pow(-m[i]) * f[i], m[i]);

    TermSpec t = inverse_node_box(f, m, q);
    const Affine tot = ytot(p);
    t.num(b, tot).den(a * q.pow(1 - M) / (dd * E), tot);
    for (size_t i = 0; i < p; ++i) {
      for (size_t k = 0; k < n; ++k) t.num(a * Q * z[k] / (e[k] * f[i]), yk(p, i)).den(a * Q * z[k] / f[i], yk(p, i));
      t.num(a * Q / (dd * f[i]), yk(p, i)).den(Q * b / f[i], yk(p, i));
    }
    return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    long n = dr.dim("n", cfg.n, 1, 3), p = dr.dim("p", cfg.p, 0, 3);
    ps.set_int("n", n);
    ps.set_int("p", p);
    ps.set_vec("z", dr.free(static_cast<size_t>(n)));
    ps.set_vec("f", dr.free(static_cast<size_t>(p)));
    ps.set_ints("m", dr.mvec(static_cast<size_t>(p)));
    ps.set("a", dr.free());
    HValue b = dr.free(), dd = dr.free();
    auto e = dr.free(static_cast<size_t>(n));
    ps.set("b", b);
    ps.set("d", dd);
    ps.set_vec("e", e);
    place({}, join({&b, &dd}, ptrs(e)), pk_modulus(ps), dr.target());
    ps.set("b", std::move(b));
    ps.set("d", std::move(dd));
    ps.set_vec("e", std::move(e));
    return ps;
  };
  d.degenerations = {{"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}, {"n=1", {{"n", 1}}}};
  return d;
}

// ---- one-variable very-well-poised ------------------------------------------

inline HValue c2_modulus(const ParamSet& ps) {
  const HValue& a = ps.scalar("a");
  return a * a * ps.q().pow(1 - ps.int_sum("m")) /
         (ps.scalar("b") * ps.scalar("c") * ps.scalar("d") * ps.scalar("e"));
}

/// prod_i (f_i, a q^{1+m_i}/f_i)_y / (q^{-m_i} f_i, a q/f_i)_y.
inline void vwp_km_group(TermSpec& t, const HValue& a, const std::vector<HValue>& f, const std::vector<long>& m,
                         const QBase& q) {
  const Affine y = yk(1, 0);
  for (size_t i = 0; i < f.size(); ++i) {
    t.num(f[i], y).num(a * q.pow(1 + m[i]) / f[i], y);
    t.den(q.pow(-m[i]) * f[i], y).den(a * q.value() / f[i], y);
  }
}

inline IdentityDescriptor make_cor_c2() {
  IdentityDescriptor d;
  d.id = "cor_c2";
  d.title = "Bilateral very-well-poised series with Karlsson-Minton pairs";
  d.schema = {integer("p"), scalar("a"), scalar("b"), scalar("c"), scalar("d"), scalar("e"),
              vec("f", "p"), ivec("m", "p")};
  d.constraints = {modulus("|a^2 q^{1-|m|} / bcde| < 1", c2_modulus), nonneg("m_i >= 0", {"m"})};
  d.dependent = "b, c, d, e (scaled jointly to place the modulus)";
  d.lhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const HValue& Q = q.value();
    const HValue& a = ps.scalar("a");
    TermSpec t(1, Mode::q, q, ps.bits());
    const Affine y = yk(1, 0);
    t.well_poised(a, 2 * y);
    for (const char* nm : {"b", "c", "d", "e"}) t.num(ps.scalar(nm), y).den(a * Q / ps.scalar(nm), y);
    vwp_km_group(t, a, ps.vec("f"), ps.ints("m"), q);
    t.power(c2_modulus(ps), y);
    return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), Domain::lattice(1)}};
  };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const HValue& Q = q.value();
    const Bits bits = ps.bits();
    const auto& f = ps.vec("f");
    const auto& m = ps.ints("m");
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &c = ps.scalar("c"), &dd = ps.scalar("d"),
                 &e = ps.scalar("e");
    const size_t p = f.size();
    const long M = total(m);
    Prefactor pre(Mode::q, q, bits);
    pre.qinf(Q).qinf(a * Q).qinf(Q / a).qinf(a * Q / (b * c)).qinf(a * Q / (b * dd)).qinf(a * Q / (b * e));
    pre.qinf(a * Q / (c * dd)).qinf(a * Q / (c * e)).qinf(a * q.pow(1 - M) / (dd * e));
    for (const HValue* x : {&b, &c, &dd, &e}) pre.qinf_den(Q / *x);
    for (const HValue* x : {&b, &c, &dd, &e}) pre.qinf_den(a * Q / *x);
    pre.qinf_den(c2_modulus(ps));
    for (size_t i = 0; i < p; ++i) {
      HValue s = q.pow(-m[i]) * f[i];
      pre.poch(s / b, m[i]).poch(s / c, m[i]).poch_den(s, m[i]).poch_den(s / a, m[i]);
    }
    TermSpec t = inverse_node_box(f, m, q);
    const Affine tot = ytot(p);
    t.num(b * c / a, tot).den(a * q.pow(1 - M) / (dd * e), tot);
    for (size_t i = 0; i < p; ++i) {
      t.num(a * Q / (dd * f[i]), yk(p, i)).num(a * Q / (e * f[i]), yk(p, i));
      t.den(Q * b / f[i], yk(p, i)).den(Q * c / f[i], yk(p, i));
    }
    return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    long p = dr.dim("p", cfg.p, 0, 3);
    ps.set_int("p", p);
    ps.set_vec("f", dr.free(static_cast<size_t>(p)));
    ps.set_ints("m", dr.mvec(static_cast<size_t>(p)));
    ps.set("a", dr.free());
    std::vector<HValue> g = dr.free(4);
    const char* names[] = {"b", "c", "d", "e"};
    for (size_t i = 0; i < 4; ++i) ps.set(names[i], g[i]);
    place({}, ptrs(g), c2_modulus(ps), dr.target());
    for (size_t i = 0; i < 4; ++i) ps.set(names[i], g[i]);
    return ps;
  };
  d.degenerations = {{"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}, {"p=1", {{"p", 1}}}};
  return d;
}

inline HValue c3_modulus(const ParamSet& ps) {
  return ps.scalar("a") * ps.q().pow(1 - ps.int_sum("m")) / (ps.scalar("b") * ps.scalar("c") * ps.scalar("d"));
}

inline IdentityDescriptor make_cor_c3() {
  IdentityDescriptor d;
  d.id = "cor_c3";
  d.title = "Unilateral very-well-poised series with Karlsson-Minton pairs";
  d.schema = {integer("p"), scalar("a"), scalar("b"), scalar("c"), scalar("d"), vec("f", "p"), ivec("m", "p")};
  d.constraints = {modulus("|a q^{1-|m|} / bcd| < 1", c3_modulus), nonneg("m_i >= 0", {"m"})};
  d.dependent = "b, c, d (scaled jointly to place the modulus)";
  d.lhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const HValue& Q = q.value();
    const HValue& a = ps.scalar("a");
    TermSpec t(1, Mode::q, q, ps.bits());
    const Affine y = yk(1, 0);
    t.well_poised(a, 2 * y);
    t.num(a, y).den(Q, y);
    for (const char* nm : {"b", "c", "d"}) t.num(ps.scalar(nm), y).den(a * Q / ps.scalar(nm), y);
    vwp_km_group(t, a, ps.vec("f"), ps.ints("m"), q);
    t.power(c3_modulus(ps), y);
    return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), Domain::orthant(1)}};
  };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const HValue& Q = q.value();
    const Bits bits = ps.bits();
    const auto& f = ps.vec("f");
    const auto& m = ps.ints("m");
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &c = ps.scalar("c"), &dd = ps.scalar("d");
    const size_t p = f.size();
    const long M = total(m);
    Prefactor pre(Mode::q, q, bits);
    pre.qinf(a * Q).qinf(a * Q / (b * c)).qinf(a * Q / (b * dd)).qinf(a * Q / (c * dd));
    pre.qinf_den(a * Q / b).qinf_den(a * Q / c).qinf_den(a * Q / dd).qinf_den(c3_modulus(ps));
    for (size_t i = 0; i < p; ++i) {
      HValue s = q.pow(-m[i]) * f[i];
      pre.poch(s / b, m[i]).poch(s / c, m[i]).poch_den(s, m[i]).poch_den(s / a, m[i]);
    }
    pre.poch(q.pow(1 - M) / dd, M);
    TermSpec t = inverse_node_box(f, m, q);
    const Affine tot = ytot(p);
    t.num(b * c / a, tot).den(q.pow(1 - M) / dd, tot);
    for (size_t i = 0; i < p; ++i) {
      t.num(a * Q / (dd * f[i]), yk(p, i)).num(Q / f[i], yk(p, i));
      t.den(Q * b / f[i], yk(p, i)).den(Q * c / f[i], yk(p, i));
    }
    return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    long p = dr.dim("p", cfg.p, 0, 3);
    ps.set_int("p", p);
    ps.set_vec("f", dr.free(static_cast<size_t>(p)));
    ps.set_ints("m", dr.mvec(static_cast<size_t>(p)));
    ps.set("a", dr.free());
    std::vector<HValue> g = dr.free(3);
    const char* names[] = {"b", "c", "d"};
    for (size_t i = 0; i < 3; ++i) ps.set(names[i], g[i]);
    place({}, ptrs(g), c3_modulus(ps), dr.target());
    for (size_t i = 0; i < 3; ++i) ps.set(names[i], g[i]);
    return ps;
  };
  d.degenerations = {{"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}};
  return d;
}

// ---- unilateral limits ----------------------------------------------------------

inline HValue limit_modulus(const ParamSet& ps) {
  return ps.scalar("d") * ps.q().pow(-ps.int_sum("m")) / (ps.scalar("a") * ps.scalar("b"));
}

/// sum_y (a, b)_y / (q, d)_y prod_i (c_i q^{m_i})_y / (c_i)_y (d q^{-|m|}/ab)^y.
inline Side limit_lhs(const ParamSet& ps) {
  const QBase& q = ps.q();
  const auto& c = ps.vec("c");
  const auto& m = ps.ints("m");
  TermSpec t(1, Mode::q, q, ps.bits());
  const Affine y = yk(1, 0);
  t.num(ps.scalar("a"), y).num(ps.scalar("b"), y).den(q.value(), y).den(ps.scalar("d"), y);
  for (size_t i = 0; i < c.size(); ++i) t.num(c[i] * q.pow(m[i]), y).den(c[i], y);
  t.power(limit_modulus(ps), y);
  return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), Domain::orthant(1)}};
}

inline ParamSet draw_limit(Draw& dr) {
  const auto& cfg = dr.cfg();
  ParamSet ps(dr.bits());
  ps.set_q(dr.base());
  long p = dr.dim("p", cfg.p, 0, 3);
  ps.set_int("p", p);
  ps.set_vec("c", dr.free(static_cast<size_t>(p)));
  ps.set_ints("m", dr.mvec(static_cast<size_t>(p)));
  HValue a = dr.free(), b = dr.free(), dd = dr.free();
  if (dr.has("d_eq_bq")) {
    dd = b * ps.q().value();
    ps.set("a", a);
    ps.set("b", b);
    ps.set("d", dd);
    // a alone carries q^{1-|m|}: the peak term no longer depends on the modulus, so aim lower
    const long M = total(ps.ints("m"));
    place({}, {&a}, limit_modulus(ps), dr.target() * ps.q().pow(std::max(0L, M - 1)));
  } else {
    ps.set("a", a);
    ps.set("b", b);
    ps.set("d", dd);
    place({&dd}, {&a, &b}, limit_modulus(ps), dr.target());
  }
  ps.set("a", std::move(a));
  ps.set("b", std::move(b));
  ps.set("d", std::move(dd));
  return ps;
}

inline std::vector<SchemaEntry> limit_schema() {
  return {integer("p"), scalar("a"), scalar("b"), scalar("d"), vec("c", "p"), ivec("m", "p")};
}

inline IdentityDescriptor make_cor_2l() {
  IdentityDescriptor d;
  d.id = "cor_2l";
  d.title = "q-analogue of the Karlsson-Minton summation extended to a finite sum";
  d.schema = limit_schema();
  d.constraints = {modulus("|d q^{-|m|} / ab| < 1", limit_modulus), nonneg("m_i >= 0", {"m"})};
  d.dependent = "a, b, d (scaled jointly to place the modulus); a alone when d = bq";
  d.lhs = limit_lhs;
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const HValue& Q = q.value();
    const auto& c = ps.vec("c");
    const auto& m = ps.ints("m");
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &dd = ps.scalar("d");
    const size_t p = c.size();
    const long M = total(m);
    Prefactor pre(Mode::q, q, ps.bits());
    pre.qinf(dd / a).qinf(dd / b).qinf_den(dd).qinf_den(limit_modulus(ps));
    for (size_t i = 0; i < p; ++i) pre.poch(Q * c[i] / dd, m[i]).poch_den(c[i], m[i]);
    pre.power(dd / Q, M).poch(q.pow(1 - M) / a, M);
    TermSpec t(p, Mode::q, q, ps.bits());
    box_group(t, c, m, q);
    const Affine tot = ytot(p);
    t.power(Q / b, tot).num(Q * b / dd, tot).den(q.pow(1 - M) / a, tot);
    for (size_t i = 0; i < p; ++i) t.num(c[i] / a, yk(p, i)).den(Q * c[i] / dd, yk(p, i));
    return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
  };
  d.draw = draw_limit;
  d.degenerations = {{"d=bq", {{"d_eq_bq", 1}}}, {"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}};
  return d;
}

inline IdentityDescriptor make_cor_3l() {
  IdentityDescriptor d;
  d.id = "cor_3l";
  d.title = "Second finite-sum form of the unilateral Karlsson-Minton type series";
  d.schema = limit_schema();
  d.constraints = {modulus("|d q^{-|m|} / ab| < 1", limit_modulus), nonneg("m_i >= 0", {"m"})};
  d.dependent = "a, b, d (scaled jointly to place the modulus)";
  d.lhs = limit_lhs;
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const HValue& Q = q.value();
    const auto& c = ps.vec("c");
    const auto& m = ps.ints("m");
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &dd = ps.scalar("d");
    const size_t p = c.size();
    Prefactor pre(Mode::q, q, ps.bits());
    pre.qinf(dd / a).qinf(dd / b).qinf_den(dd).qinf_den(limit_modulus(ps));
    for (size_t i = 0; i < p; ++i) pre.poch(q.pow(-m[i]) * dd / c[i], m[i]);
    TermSpec t(p, Mode::q, q, ps.bits());
    box_group(t, c, m, q);
    t.power(Q, ytot(p));
    for (size_t i = 0; i < p; ++i) {
      t.num(c[i] / a, yk(p, i)).num(c[i] / b, yk(p, i));
      t.den(c[i], yk(p, i)).den(Q * c[i] / dd, yk(p, i));
    }
    return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
  };
  d.draw = draw_limit;
  d.degenerations = {{"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}};
  return d;
}

}  // namespace kmv::build
