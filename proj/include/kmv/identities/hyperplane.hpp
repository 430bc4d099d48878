#pragma once

// U(n) sums over the hyperplane |y| = N: the Bailey-type base sum, the
// reduction formula and its shifted form, and the specializations that keep
// the same left-hand side.

#include "kmv/identities/core.hpp"

namespace kmv::build {

/// Shared left-hand side: hyperplane sum with Vandermonde nodes z,
/// Karlsson-Minton pairs (c, m) and parameter pairs (a, b).
inline Side km_hyperplane_side(const ParamSet& ps, const std::vector<HValue>& z, long N) {
  const QBase& q = ps.q();
  const size_t n = z.size();
  TermSpec t(n, Mode::q, q, ps.bits());
  t.vandermonde(z);
  if (ps.has_vec("c")) km_group(t, ps.vec("c"), ps.ints("m"), z, q);
  ab_group(t, ps.vec("a"), ps.vec("b"), z);
  return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), Domain::hyperplane(n, N)}};
}

/// Right-hand side of the shifted reduction formula (N = 0 gives the
/// unshifted one).
inline Side reduction_rhs(const ParamSet& ps, long N) {
  const QBase& q = ps.q();
  const Bits bits = ps.bits();
  const auto &a = ps.vec("a"), &b = ps.vec("b"), &z = ps.vec("z"), &c = ps.vec("c");
  const auto& m = ps.ints("m");
  const size_t n = z.size(), p = c.size();
  const long M = total(m);
  const HValue A = prod(a, bits), B = prod(b, bits), Z = prod(z, bits);
  const HValue AZ = A * Z, BZ = B * Z;

  Prefactor pre(Mode::q, q, bits);
  pre.power(q.value(), N * (N - 1) / 2).power(-(q.pow(M) * AZ), N);
  pre.qinf(q.pow(1 - M - N) / AZ).qinf(q.pow(1 + N - static_cast<long>(n)) * BZ);
  pre.qinf_den(q.value()).qinf_den(q.pow(1 - M - static_cast<long>(n)) * B / A);
  gustafson_product(pre, a, b, z, q);
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < p; ++i) {
      pre.poch(q.pow(-m[i]) * b[k] / c[i], m[i]);
      pre.poch_den(q.pow(1 - m[i]) / (c[i] * z[k]), m[i]);
    }
  }

  TermSpec t(p, Mode::q, q, bits);
  box_group(t, c, m, q);
  t.power(q.value(), ytot(p));
  t.num(q.pow(static_cast<long>(n) - N) / BZ, ytot(p)).den(q.pow(1 - M - N) / AZ, ytot(p));
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < p; ++i) t.num(c[i] / a[k], yk(p, i)).den(q.value() * c[i] / b[k], yk(p, i));
  }
  return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
}

inline HValue reduction_modulus(const ParamSet& ps) {
  const long n = ps.integer("n");
  return ps.q().pow(1 - ps.int_sum("m") - n) * ps.product("b") / ps.product("a");
}

/// Common draw: q, n, p, z, a, c, m; b is solved from the target modulus
/// rho = q^{1-|m|-n} B / A.
inline ParamSet draw_reduction(Draw& d, bool with_c) {
  const auto& cfg = d.cfg();
  ParamSet ps(d.bits());
  HValue q = d.base();
  ps.set_q(q);
  const QBase& qb = ps.q();
  long n = d.dim("n", cfg.n, 1, 3);
  long p = with_c ? d.dim("p", cfg.p, 0, 3) : 0;
  ps.set_int("n", n);
  auto z = d.free(static_cast<size_t>(n));
  auto a = d.free(static_cast<size_t>(n));
  if (with_c) {
    ps.set_int("p", p);
    ps.set_vec("c", d.free(static_cast<size_t>(p)));
    ps.set_ints("m", d.mvec(static_cast<size_t>(p)));
  }
  long M = with_c ? total(ps.ints("m")) : 0;
  HValue rho = d.target();
  HValue B = rho * prod(a, d.bits()) * qb.pow(M + n - 1);
  ps.set_vec("b", free_with_product(d, static_cast<size_t>(n), B));
  ps.set_vec("a", std::move(a));
  ps.set_vec("z", std::move(z));
  return ps;
}

inline std::vector<SchemaEntry> reduction_schema() {
  return {integer("n"), integer("p"), vec("a", "n"), vec("b", "n"), vec("z", "n"), vec("c", "p"), ivec("m", "p")};
}

inline IdentityDescriptor make_gustafson() {
  IdentityDescriptor d;
  d.id = "gustafson_6psi6";
  d.title = "U(n) 6psi6 sum over the hyperplane |y| = 0";
  d.schema = {integer("n"), vec("a", "n"), vec("b", "n"), vec("z", "n")};
  d.constraints = {modulus("|q^{1-n} B/A| < 1", [](const ParamSet& ps) {
    return ps.q().pow(1 - ps.integer("n")) * ps.product("b") / ps.product("a");
  })};
  d.dependent = "b (scaled jointly to place q^{1-n}B/A)";
  d.lhs = [](const ParamSet& ps) { return km_hyperplane_side(ps, ps.vec("z"), 0); };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const Bits bits = ps.bits();
    const auto &a = ps.vec("a"), &b = ps.vec("b"), &z = ps.vec("z");
    const long n = static_cast<long>(z.size());
    const HValue A = prod(a, bits), B = prod(b, bits), Z = prod(z, bits);
    Prefactor pre(Mode::q, q, bits);
    pre.qinf(q.value() / (A * Z)).qinf(q.pow(1 - n) * B * Z);
    pre.qinf_den(q.value()).qinf_den(q.pow(1 - n) * B / A);
    gustafson_product(pre, a, b, z, q);
    return Side{std::move(pre), std::nullopt};
  };
  d.draw = [](Draw& dr) { return draw_reduction(dr, false); };
  d.degenerations = {{"n=1", {{"n", 1}}}, {"n=2", {{"n", 2}}}};
  return d;
}

inline IdentityDescriptor make_thm1() {
  IdentityDescriptor d;
  d.id = "thm1";
  d.title = "Reduction of a multilateral Karlsson-Minton type series to a finite sum";
  d.schema = reduction_schema();
  d.constraints = {modulus("|q^{1-|m|-n} B/A| < 1", reduction_modulus), nonneg("m_i >= 0", {"m"})};
  d.dependent = "b (scaled jointly to place q^{1-|m|-n}B/A)";
  d.lhs = [](const ParamSet& ps) { return km_hyperplane_side(ps, ps.vec("z"), 0); };
  d.rhs = [](const ParamSet& ps) { return reduction_rhs(ps, 0); };
  d.draw = [](Draw& dr) { return draw_reduction(dr, true); };
  d.degenerations = {{"m=0", {{"m_zero", 1}}}, {"some m_i=0", {{"m_some_zero", 1}, {"p", 2}}},
                     {"p=0", {{"p", 0}}},     {"n=1", {{"n", 1}}}};
  return d;
}

inline IdentityDescriptor make_thm1_shifted() {
  IdentityDescriptor d;
  d.id = "thm1_shifted";
  d.title = "Reduction formula over the shifted hyperplane |y| = N";
  d.schema = reduction_schema();
  d.schema.push_back(integer("N"));
  d.constraints = {modulus("|q^{1-|m|-n} B/A| < 1", reduction_modulus), nonneg("m_i >= 0", {"m"})};
  d.dependent = "b (scaled jointly to place q^{1-|m|-n}B/A)";
  d.lhs = [](const ParamSet& ps) { return km_hyperplane_side(ps, ps.vec("z"), ps.integer("N")); };
  d.rhs = [](const ParamSet& ps) { return reduction_rhs(ps, ps.integer("N")); };
  d.draw = [](Draw& dr) {
    ParamSet ps = draw_reduction(dr, true);
    ps.set_int("N", dr.dim("N", dr.cfg().N, -2, 2));
    return ps;
  };
  d.degenerations = {{"N=0", {{"N", 0}}}, {"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}, {"n=1", {{"n", 1}}}};
  return d;
}

inline IdentityDescriptor make_cor_st() {
  IdentityDescriptor d;
  d.id = "cor_st";
  d.title = "Transformation between two hyperplane series with equal node products Z = W";
  d.schema = reduction_schema();
  d.schema.push_back(vec("w", "n"));
  d.constraints = {modulus("|q^{1-n-|m|} B/A| < 1", reduction_modulus),
                   equality("Z = W", [](const ParamSet& ps) { return ps.product("z"); },
                            [](const ParamSet& ps) { return ps.product("w"); }),
                   nonneg("m_i >= 0", {"m"})};
  d.dependent = "b (modulus); w_n from W = Z";
  d.lhs = [](const ParamSet& ps) { return km_hyperplane_side(ps, ps.vec("z"), 0); };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const auto &a = ps.vec("a"), &b = ps.vec("b"), &z = ps.vec("z"), &w = ps.vec("w"), &c = ps.vec("c");
    const auto& m = ps.ints("m");
    const size_t n = z.size();
    Side s = km_hyperplane_side(ps, w, 0);
    Prefactor& pre = s.pre;
    for (size_t i = 0; i < n; ++i) {
      for (size_t k = 0; k < n; ++k) {
        pre.qinf(q.value() / (a[k] * w[i])).qinf(b[i] * w[k]).qinf(q.value() * z[k] / z[i]);
        pre.qinf_den(q.value() / (a[k] * z[i])).qinf_den(b[i] * z[k]).qinf_den(q.value() * w[k] / w[i]);
      }
    }
    for (size_t k = 0; k < n; ++k) {
      for (size_t i = 0; i < c.size(); ++i) pre.poch(c[i] * w[k], m[i]).poch_den(c[i] * z[k], m[i]);
    }
    return s;
  };
  d.draw = [](Draw& dr) {
    ParamSet ps = draw_reduction(dr, true);
    const size_t n = ps.vec("z").size();
    std::vector<HValue> w;
    if (dr.has("permute")) {
      // a cyclic shift of the nodes
      const auto& z = ps.vec("z");
      for (size_t k = 0; k < n; ++k) w.push_back(z[(k + 1) % n]);
    } else {
      w = free_with_product(dr, n, ps.product("z"));
    }
    ps.set_vec("w", std::move(w));
    return ps;
  };
  d.degenerations = {{"w permutation of z", {{"permute", 1}, {"n", 3}}},
                     {"m=0", {{"m_zero", 1}}},
                     {"p=0", {{"p", 0}}}};
  return d;
}

inline IdentityDescriptor make_cor_csc() {
  IdentityDescriptor d;
  d.id = "cor_csc";
  d.title = "Closed-form evaluation when BZ = q^n";
  d.schema = reduction_schema();
  d.constraints = {equality("BZ = q^n", [](const ParamSet& ps) { return ps.product("b") * ps.product("z"); },
                            [](const ParamSet& ps) { return ps.q().pow(ps.integer("n")); }),
                   modulus("|q^{1-|m|}/AZ| < 1",
                           [](const ParamSet& ps) {
                             return ps.q().pow(1 - ps.int_sum("m")) / (ps.product("a") * ps.product("z"));
                           }),
                   nonneg("m_i >= 0", {"m"})};
  d.dependent = "b (BZ = q^n); a (scaled jointly to place q^{1-|m|}/AZ)";
  d.lhs = [](const ParamSet& ps) { return km_hyperplane_side(ps, ps.vec("z"), 0); };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const auto &a = ps.vec("a"), &b = ps.vec("b"), &z = ps.vec("z"), &c = ps.vec("c");
    const auto& m = ps.ints("m");
    Prefactor pre(Mode::q, q, ps.bits());
    gustafson_product(pre, a, b, z, q);
    for (size_t k = 0; k < z.size(); ++k) {
      for (size_t i = 0; i < c.size(); ++i) {
        pre.poch(q.value() * c[i] / b[k], m[i]).poch_den(c[i] * z[k], m[i]);
      }
    }
    return Side{std::move(pre), std::nullopt};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    const QBase& q = ps.q();
    long n = dr.dim("n", cfg.n, 1, 3), p = dr.dim("p", cfg.p, 0, 3);
    ps.set_int("n", n);
    ps.set_int("p", p);
    auto z = dr.free(static_cast<size_t>(n));
    ps.set_vec("c", dr.free(static_cast<size_t>(p)));
    ps.set_ints("m", dr.mvec(static_cast<size_t>(p)));
    const long M = total(ps.ints("m"));
    const HValue Z = prod(z, dr.bits());
    HValue rho = dr.target();
    ps.set_vec("a", free_with_product(dr, static_cast<size_t>(n), q.pow(1 - M) / (rho * Z)));
    ps.set_vec("b", free_with_product(dr, static_cast<size_t>(n), q.pow(n) / Z));
    ps.set_vec("z", std::move(z));
    return ps;
  };
  d.degenerations = {{"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}, {"n=1", {{"n", 1}}}};
  return d;
}

inline IdentityDescriptor make_cor_chu_un() {
  IdentityDescriptor d;
  d.id = "cor_chu_un";
  d.title = "U(n) extension of Chu's bilateral summation with a_k/(q a_k) pairs";
  d.schema = {integer("n"), integer("p"), vec("a", "n-1"), scalar("b"), scalar("d"),
              vec("z", "n"), vec("c", "p"),  ivec("m", "p")};
  d.constraints = {modulus("|q^{-|m|} d/b| < 1",
                           [](const ParamSet& ps) {
                             return ps.q().pow(-ps.int_sum("m")) * ps.scalar("d") / ps.scalar("b");
                           }),
                   nonneg("m_i >= 0", {"m"})};
  d.dependent = "b and d (ratio d/b placed, split evenly)";
  d.lhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const auto &a = ps.vec("a"), &z = ps.vec("z");
    const size_t n = z.size();
    TermSpec t(n, Mode::q, q, ps.bits());
    t.vandermonde(z);
    km_group(t, ps.vec("c"), ps.ints("m"), z, q);
    for (size_t k = 0; k < n; ++k) {
      for (const auto& ai : a) t.num(ai * z[k], yk(n, k)).den(q.value() * ai * z[k], yk(n, k));
      t.num(ps.scalar("b") * z[k], yk(n, k)).den(ps.scalar("d") * z[k], yk(n, k));
    }
    return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), Domain::hyperplane(n, 0)}};
  };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const Bits bits = ps.bits();
    const auto &a = ps.vec("a"), &z = ps.vec("z"), &c = ps.vec("c");
    const auto& m = ps.ints("m");
    const HValue &b = ps.scalar("b"), &dd = ps.scalar("d");
    const HValue AZ = prod(a, bits) * prod(z, bits);
    const HValue& Q = q.value();
    Prefactor pre(Mode::q, q, bits);
    pre.qinf(Q / (AZ * b)).qinf(AZ * dd);
    for (const auto& ai : a) {
      for (const auto& ak : a) pre.qinf(Q * ak / ai);
    }
    for (const auto& zi : z) {
      for (const auto& zk : z) pre.qinf(Q * zk / zi);
    }
    for (const auto& ak : a) pre.qinf(Q * ak / b).qinf(dd / ak);
    pre.qinf_den(Q);
    for (const auto& ak : a) {
      for (const auto& zi : z) pre.qinf_den(Q / (ak * zi)).qinf_den(Q * ak * zi);
    }
    for (const auto& zk : z) pre.qinf_den(Q / (b * zk)).qinf_den(dd * zk);
    for (size_t i = 0; i < c.size(); ++i) {
      pre.poch(c[i] * AZ, m[i]);
      for (const auto& ak : a) pre.poch(c[i] / ak, m[i]);
      for (const auto& zk : z) pre.poch_den(c[i] * zk, m[i]);
    }
    return Side{std::move(pre), std::nullopt};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    long n = dr.dim("n", cfg.n, 2, 3), p = dr.dim("p", cfg.p, 0, 3);
    ps.set_int("n", n);
    ps.set_int("p", p);
    ps.set_vec("a", dr.free(static_cast<size_t>(n - 1)));
    ps.set_vec("z", dr.free(static_cast<size_t>(n)));
    ps.set_vec("c", dr.free(static_cast<size_t>(p)));
    ps.set_ints("m", dr.mvec(static_cast<size_t>(p)));
    HValue ratio = dr.target() * ps.q().pow(total(ps.ints("m")));
    // d/b is split evenly between the two so neither drifts far from the band
    HValue b = dr.free() / root(ratio, 2);
    ps.set("d", b * ratio);
    ps.set("b", std::move(b));
    return ps;
  };
  d.degenerations = {{"m=0", {{"m_zero", 1}}}, {"p=0", {{"p", 0}}}, {"n=1", {{"n", 1}}}};
  return d;
}

}  // namespace kmv::build
