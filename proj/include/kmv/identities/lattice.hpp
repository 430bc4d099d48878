#pragma once

// Full-lattice series weighted by t^{|y|}: the generalized 1psi1 sums and
// the transformation between lattices of different dimension.

#include "kmv/identities/hyperplane.hpp"
#include "kmv/identities/wellpoised.hpp"

namespace kmv::build {

inline HValue psi_modulus(const ParamSet& ps, const std::string& shift) {
  return ps.q().pow(1 - ps.int_sum(shift) - ps.integer("n")) * ps.product("b") / ps.product("a");
}

/// Full-lattice sum Delta(zq^y)/Delta(z) prod (d_i q^{l_i})_{|y|}/(d_i)_{|y|}
/// prod (a_i z_k)_{y_k}/(b_i z_k)_{y_k} t^{|y|}.
inline Series psi_series(const std::vector<HValue>& a, const std::vector<HValue>& b, const std::vector<HValue>& z,
                         const std::vector<HValue>& d, const std::vector<long>& l, const HValue& t, const QBase& q) {
  const size_t n = z.size();
  TermSpec s(n, Mode::q, q, q.bits());
  s.vandermonde(z);
  for (size_t i = 0; i < d.size(); ++i) s.num(d[i] * q.pow(l[i]), ytot(n)).den(d[i], ytot(n));
  ab_group(s, a, b, z);
  s.power(t, ytot(n));
  return Series{std::move(s), Domain::lattice(n)};
}

/// (AZt, q/AZt)_inf / (t, q^{1-n}B/At)_inf / (q^n At/B)_K times the Gustafson product.
inline Prefactor psi_prefactor(const ParamSet& ps, long K) {
  const QBase& q = ps.q();
  const Bits bits = ps.bits();
  const auto &a = ps.vec("a"), &b = ps.vec("b"), &z = ps.vec("z");
  const HValue& t = ps.scalar("t");
  const long n = static_cast<long>(z.size());
  const HValue A = prod(a, bits), B = prod(b, bits), AZt = A * prod(z, bits) * t;
  Prefactor pre(Mode::q, q, bits);
  pre.qinf(AZt).qinf(q.value() / AZt).qinf_den(t).qinf_den(q.pow(1 - n) * B / (A * t));
  pre.poch_den(q.pow(n) * A * t / B, K);
  gustafson_product(pre, a, b, z, q);
  return pre;
}

/// q, n, a, b, z with |q^{1-K-n} B/A| = |t| times a band value and |t| in the band.
inline void draw_psi(Draw& dr, ParamSet& ps, long K) {
  const QBase& q = ps.q();
  const long n = ps.integer("n");
  auto a = dr.free(static_cast<size_t>(n));
  auto b = dr.free(static_cast<size_t>(n));
  HValue t = dr.target();
  HValue rho = t * dr.target();
  // |A| near 1/|t| and |B| near |rho/t|: each side's transient then matches its own decay rate
  const HValue shift = q.pow(K + n - 1);
  const HValue half = root(shift, 2);
  const HValue A = dr.free() / (t * half);
  place(ptrs(a), {}, prod(a, dr.bits()), A);
  place(ptrs(b), {}, prod(b, dr.bits()), rho * shift * A);
  ps.set_vec("a", std::move(a));
  ps.set_vec("b", std::move(b));
  ps.set_vec("z", dr.free(static_cast<size_t>(n)));
  ps.set("t", std::move(t));
}

inline std::vector<Constraint> psi_constraints(const std::string& shift) {
  return {modulus_below("|q^{1-|" + shift + "|-n} B/A| < |t|", [shift](const ParamSet& ps) { return psi_modulus(ps, shift); },
                        [](const ParamSet& ps) { return ps.scalar("t"); }),
          modulus("|t| < 1", [](const ParamSet& ps) { return ps.scalar("t"); }),
          nonneg(shift + "_i >= 0", {shift})};
}

inline IdentityDescriptor make_cor_c1p() {
  IdentityDescriptor d;
  d.id = "cor_c1p";
  d.title = "Multilateral 1psi1-type sum with Karlsson-Minton pairs";
  d.schema = reduction_schema();
  d.schema.push_back(scalar("t"));
  d.constraints = psi_constraints("m");
  d.dependent = "a and b (ratio B/A placed below t, A near 1/t)";
  d.lhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const auto& z = ps.vec("z");
    const size_t n = z.size();
    TermSpec t(n, Mode::q, q, ps.bits());
    t.vandermonde(z);
    km_group(t, ps.vec("c"), ps.ints("m"), z, q);
    ab_group(t, ps.vec("a"), ps.vec("b"), z);
    t.power(ps.scalar("t"), ytot(n));
    return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), Domain::lattice(n)}};
  };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const Bits bits = ps.bits();
    const auto &a = ps.vec("a"), &b = ps.vec("b"), &z = ps.vec("z"), &c = ps.vec("c");
    const auto& m = ps.ints("m");
    const size_t n = z.size(), p = c.size();
    const long M = total(m);
    Prefactor pre = psi_prefactor(ps, M);
    for (size_t k = 0; k < n; ++k) {
      for (size_t i = 0; i < p; ++i) pre.poch(q.value() * c[i] / b[k], m[i]).poch_den(c[i] * z[k], m[i]);
    }
    TermSpec t(p, Mode::q, q, bits);
    box_group(t, c, m, q);
    t.power(q.pow(static_cast<long>(n) + M) * prod(a, bits) * ps.scalar("t") / prod(b, bits), ytot(p));
    for (size_t k = 0; k < n; ++k) {
      for (size_t i = 0; i < p; ++i) t.num(c[i] / a[k], yk(p, i)).den(q.value() * c[i] / b[k], yk(p, i));
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
    ps.set_vec("c", dr.free(static_cast<size_t>(p)));
    ps.set_ints("m", dr.mvec(static_cast<size_t>(p)));
    draw_psi(dr, ps, total(ps.ints("m")));
    return ps;
  };
  d.degenerations = {{"p=0", {{"p", 0}}}, {"m=0", {{"m_zero", 1}}}, {"n=1", {{"n", 1}}}};
  return d;
}

inline std::vector<SchemaEntry> cn_schema() {
  return {integer("n"), integer("r"), vec("a", "n"), vec("b", "n"), vec("z", "n"),
          vec("d", "r"), ivec("l", "r"), scalar("t")};
}

inline void draw_cn_common(Draw& dr, ParamSet& ps) {
  const auto& cfg = dr.cfg();
  long n = dr.dim("n", cfg.n, 1, 3), r = dr.dim("r", cfg.r, 0, 3);
  ps.set_int("n", n);
  ps.set_int("r", r);
  ps.set_vec("d", dr.free(static_cast<size_t>(r)));
  ps.set_ints("l", dr.mvec(static_cast<size_t>(r)));
  draw_psi(dr, ps, total(ps.ints("l")));
}

inline IdentityDescriptor make_cor_cn() {
  IdentityDescriptor d;
  d.id = "cor_cn";
  d.title = "Multilateral 1psi1-type sum with shifted factors in |y|";
  d.schema = cn_schema();
  d.constraints = psi_constraints("l");
  d.dependent = "a and b (ratio B/A placed below t, A near 1/t)";
  d.lhs = [](const ParamSet& ps) {
    return Side{Prefactor(Mode::q, ps.q(), ps.bits()),
                psi_series(ps.vec("a"), ps.vec("b"), ps.vec("z"), ps.vec("d"), ps.ints("l"), ps.scalar("t"), ps.q())};
  };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const Bits bits = ps.bits();
    const auto& dv = ps.vec("d");
    const auto& l = ps.ints("l");
    const long n = ps.integer("n"), L = total(l);
    const size_t r = dv.size();
    const HValue A = ps.product("a"), B = ps.product("b"), Z = ps.product("z");
    Prefactor pre = psi_prefactor(ps, L);
    for (size_t i = 0; i < r; ++i) pre.poch(q.pow(n) * dv[i] / (B * Z), l[i]).poch_den(dv[i], l[i]);
    TermSpec t(r, Mode::q, q, bits);
    box_group(t, dv, l, q);
    t.power(q.pow(n + L) * A * ps.scalar("t") / B, ytot(r));
    for (size_t i = 0; i < r; ++i) t.num(dv[i] / (A * Z), yk(r, i)).den(q.pow(n) * dv[i] / (B * Z), yk(r, i));
    return Side{std::move(pre), Series{std::move(t), Domain::box(l)}};
  };
  d.draw = [](Draw& dr) {
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    draw_cn_common(dr, ps);
    return ps;
  };
  d.degenerations = {{"r=0", {{"r", 0}}}, {"l=0", {{"m_zero", 1}}}, {"n=1", {{"n", 1}}}};
  return d;
}

inline IdentityDescriptor make_cor_cmn() {
  IdentityDescriptor d;
  d.id = "cor_cmn";
  d.title = "Transformation between t-weighted lattice series of different dimension";
  d.schema = cn_schema();
  for (auto e : {integer("nt"), vec("at", "nt"), vec("bt", "nt"), vec("zt", "nt"), scalar("u")}) d.schema.push_back(e);
  d.constraints = psi_constraints("l");
  d.constraints.push_back(equality("At Zt = u AZ",
                                   [](const ParamSet& ps) { return ps.product("at") * ps.product("zt"); },
                                   [](const ParamSet& ps) {
                                     return ps.scalar("u") * ps.product("a") * ps.product("z");
                                   }));
  d.constraints.push_back(equality("Bt Zt = q^{nt-n} u BZ",
                                   [](const ParamSet& ps) { return ps.product("bt") * ps.product("zt"); },
                                   [](const ParamSet& ps) {
                                     return ps.q().pow(ps.integer("nt") - ps.integer("n")) * ps.scalar("u") *
                                            ps.product("b") * ps.product("z");
                                   }));
  d.dependent = "a and b (ratio B/A placed below t, A near 1/t); at and bt (scaled jointly to the two product equalities)";
  d.lhs = make_cor_cn().lhs;
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const Bits bits = ps.bits();
    const auto &a = ps.vec("a"), &b = ps.vec("b"), &z = ps.vec("z");
    const auto &at = ps.vec("at"), &bt = ps.vec("bt"), &zt = ps.vec("zt");
    const auto& dv = ps.vec("d");
    const auto& l = ps.ints("l");
    const HValue &t = ps.scalar("t"), &u = ps.scalar("u");
    const HValue& Q = q.value();
    const HValue AZt = prod(a, bits) * prod(z, bits) * t;
    Prefactor pre(Mode::q, q, bits);
    pre.qinf(AZt).qinf(Q / AZt).qinf_den(AZt * u).qinf_den(Q / (AZt * u));
    gustafson_product(pre, a, b, z, q);
    for (size_t i = 0; i < zt.size(); ++i) {
      for (size_t k = 0; k < zt.size(); ++k) {
        pre.qinf(Q / (at[k] * zt[i])).qinf(bt[i] * zt[k]);
        pre.qinf_den(bt[i] / at[k]).qinf_den(Q * zt[k] / zt[i]);
      }
    }
    std::vector<HValue> ud;
    for (size_t i = 0; i < dv.size(); ++i) {
      pre.poch(u * dv[i], l[i]).poch_den(dv[i], l[i]);
      ud.push_back(u * dv[i]);
    }
    return Side{std::move(pre), psi_series(at, bt, zt, ud, l, t, q)};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    draw_cn_common(dr, ps);
    const QBase& q = ps.q();
    const long n = ps.integer("n");
    long nt = dr.dim("nt", cfg.n, 1, 3);
    ps.set_int("nt", nt);
    HValue u = dr.free();
    auto zt = dr.free(static_cast<size_t>(nt));
    const HValue Zt = prod(zt, dr.bits());
    ps.set_vec("at", free_with_product(dr, static_cast<size_t>(nt), u * ps.product("a") * ps.product("z") / Zt));
    ps.set_vec("bt", free_with_product(dr, static_cast<size_t>(nt),
                                       q.pow(nt - n) * u * ps.product("b") * ps.product("z") / Zt));
    ps.set_vec("zt", std::move(zt));
    ps.set("u", std::move(u));
    return ps;
  };
  d.degenerations = {{"nt=1", {{"nt", 1}}}, {"nt=n", {{"nt", 2}, {"n", 2}}}, {"r=0", {{"r", 0}}}};
  return d;
}

}  // namespace kmv::build
