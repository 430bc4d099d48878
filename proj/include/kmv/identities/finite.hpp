#pragma once

// Identities whose two sides are both finite: terminating specializations
// and the multivariable Saalschutz, Dougall, Sears and Watson-Bailey forms.

#include <algorithm>

#include "kmv/identities/hyperplane.hpp"
#include "kmv/identities/wellpoised.hpp"

namespace kmv::build {

/// Non-negative offset (N, or L) from the configured offset range, capped at hi.
inline long offset(Draw& dr, const std::string& key, long hi) { return dr.dim(key, dr.cfg().L, 0, hi); }

/// |x| = N inside [0, N]^n.
inline Domain layer(size_t n, long N) { return Domain::box_hyperplane(std::vector<long>(n, N), N); }

/// Delta(zq^x)/Delta(z) q^{|x|} prod (q^{-m_k} z_i/z_k)_{x_i} / (q z_i/z_k)_{x_i}, the common
/// skeleton of the box sums with nodes z.
inline TermSpec box_skeleton(const std::vector<HValue>& z, const std::vector<long>& m, const QBase& q, bool with_q) {
  TermSpec t(z.size(), Mode::q, q, q.bits());
  box_group(t, z, m, q);
  if (with_q) t.power(q.value(), ytot(z.size()));
  return t;
}

// ---- terminating reduction formula ---------------------------------------

inline IdentityDescriptor make_cor_pkb() {
  IdentityDescriptor d;
  d.id = "cor_pkb";
  d.title = "Well-poised reduction formula with AZ = q^{-|m|} and BZ = q^n";
  d.schema = reduction_schema();
  d.schema.push_back(integer("N"));
  d.constraints = {equality("AZ = q^{-|m|}", [](const ParamSet& ps) { return ps.product("a") * ps.product("z"); },
                            [](const ParamSet& ps) { return ps.q().pow(-ps.int_sum("m")); }),
                   equality("BZ = q^n", [](const ParamSet& ps) { return ps.product("b") * ps.product("z"); },
                            [](const ParamSet& ps) { return ps.q().pow(ps.integer("n")); }),
                   nonneg("m_i >= 0", {"m"})};
  d.dependent = "b_k = q/z_k (terminating choice); a (scaled jointly to AZ = q^{-|m|})";
  d.lhs = [](const ParamSet& ps) { return km_hyperplane_side(ps, ps.vec("z"), ps.integer("N")); };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const auto &a = ps.vec("a"), &b = ps.vec("b"), &z = ps.vec("z"), &c = ps.vec("c");
    const auto& m = ps.ints("m");
    const size_t n = z.size(), p = c.size();
    Prefactor pre(Mode::q, q, ps.bits());
    gustafson_product(pre, a, b, z, q);
    for (size_t k = 0; k < n; ++k) {
      for (size_t i = 0; i < p; ++i) pre.poch(q.value() * c[i] / b[k], m[i]).poch_den(c[i] * z[k], m[i]);
    }
    TermSpec t(p, Mode::q, q, ps.bits());
    box_group(t, c, m, q);
    for (size_t k = 0; k < n; ++k) {
      for (size_t i = 0; i < p; ++i) t.num(c[i] / a[k], yk(p, i)).den(q.value() * c[i] / b[k], yk(p, i));
    }
    return Side{std::move(pre), Series{std::move(t), Domain::box_hyperplane(m, ps.integer("N"))}};
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
    std::vector<HValue> b;
    for (const auto& zk : z) b.push_back(q.value() / zk);
    ps.set_vec("a", free_with_product(dr, static_cast<size_t>(n), q.pow(-M) / prod(z, dr.bits())));
    ps.set_vec("b", std::move(b));
    ps.set_vec("z", std::move(z));
    ps.set_int("N", std::min(offset(dr, "N", 4), M));
    return ps;
  };
  d.degenerations = {{"N=0", {{"N", 0}}}, {"p=0", {{"p", 0}, {"N", 0}}}, {"n=1", {{"n", 1}}}};
  d.finite = true;
  return d;
}

// ---- Kajihara ---------------------------------------------------------------

inline HValue kc_argument(const ParamSet& ps) {
  const long p = ps.integer("p");
  const HValue& a = ps.scalar("a");
  return pow(a, p + 1) * ps.q().pow(p + 1) / (ps.scalar("d") * ps.product("e") * ps.product("f") * ps.product("g"));
}

inline IdentityDescriptor make_cor_kc() {
  IdentityDescriptor d;
  d.id = "cor_kajihara_watson";
  d.title = "Watson-type transformation between U(n) and U(p) terminating series";
  d.schema = {integer("n"), integer("p"), integer("N"), scalar("a"), scalar("d"),
              vec("z", "n"),  vec("e", "n"),  vec("f", "p"),  vec("g", "p")};
  d.constraints = {nonneg("N >= 0", {"N"})};
  d.dependent = "none";
  d.lhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const HValue& Q = q.value();
    const auto &z = ps.vec("z"), &e = ps.vec("e"), &f = ps.vec("f"), &g = ps.vec("g");
    const HValue &a = ps.scalar("a"), &dd = ps.scalar("d");
    const long N = ps.integer("N");
    const size_t n = z.size();
    TermSpec t(n, Mode::q, q, ps.bits());
    t.vandermonde(z);
    const Affine tot = ytot(n);
    for (size_t k = 0; k < n; ++k) t.well_poised(a * z[k], yk(n, k) + tot);
    t.num(q.pow(-N), tot).den(a * Q / dd, tot);
    for (size_t k = 0; k < n; ++k) t.num(a * z[k], tot).den(a * Q * z[k] / e[k], tot);
    for (size_t i = 0; i < f.size(); ++i) t.num(f[i], tot).den(a * Q / g[i], tot);
    for (size_t k = 0; k < n; ++k) {
      t.num(dd * z[k], yk(n, k)).den(a * q.pow(1 + N) * z[k], yk(n, k));
      for (size_t i = 0; i < n; ++i) t.num(e[i] * z[k] / z[i], yk(n, k)).den(Q * z[k] / z[i], yk(n, k));
      for (size_t i = 0; i < f.size(); ++i) t.num(g[i] * z[k], yk(n, k)).den(a * Q * z[k] / f[i], yk(n, k));
    }
    t.power(kc_argument(ps) * q.pow(N), tot);
    return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), Domain::simplex(n, N)}};
  };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const HValue& Q = q.value();
    const auto &z = ps.vec("z"), &e = ps.vec("e"), &f = ps.vec("f"), &g = ps.vec("g");
    const HValue &a = ps.scalar("a"), &dd = ps.scalar("d");
    const long N = ps.integer("N");
    const size_t n = z.size(), p = f.size();
    const HValue s = kc_argument(ps);
    Prefactor pre(Mode::q, q, ps.bits());
    pre.poch(s, N).poch_den(a * Q / dd, N);
    for (size_t k = 0; k < n; ++k) pre.poch(a * Q * z[k], N).poch_den(a * Q * z[k] / e[k], N);
    for (size_t i = 0; i < p; ++i) pre.poch(f[i], N).poch_den(a * Q / g[i], N);

    TermSpec t(p, Mode::q, q, ps.bits());
    std::vector<HValue> nodes;
    for (const auto& fi : f) nodes.push_back(fi.reciprocal());
    t.vandermonde(nodes);
    const Affine tot = ytot(p);
    t.power(Q, tot).num(q.pow(-N), tot).den(s, tot);
    for (size_t i = 0; i < p; ++i) {
      for (size_t k = 0; k < n; ++k) t.num(a * Q * z[k] / (f[i] * e[k]), yk(p, i)).den(a * Q * z[k] / f[i], yk(p, i));
      t.num(a * Q / (dd * f[i]), yk(p, i)).den(q.pow(1 - N) / f[i], yk(p, i));
      for (size_t k = 0; k < p; ++k) t.num(a * Q / (g[k] * f[i]), yk(p, i)).den(Q * f[k] / f[i], yk(p, i));
    }
    return Side{std::move(pre), Series{std::move(t), Domain::simplex(p, N)}};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    long n = dr.dim("n", cfg.n, 1, 3), p = dr.dim("p", cfg.p, 0, 3);
    ps.set_int("n", n);
    ps.set_int("p", p);
    ps.set_int("N", offset(dr, "N", 4));
    ps.set("a", dr.free());
    ps.set("d", dr.free());
    ps.set_vec("z", dr.free(static_cast<size_t>(n)));
    ps.set_vec("e", dr.free(static_cast<size_t>(n)));
    ps.set_vec("f", dr.free(static_cast<size_t>(p)));
    ps.set_vec("g", dr.free(static_cast<size_t>(p)));
    return ps;
  };
  d.degenerations = {{"N=0", {{"N", 0}}}, {"p=0", {{"p", 0}}}, {"n=p=1", {{"n", 1}, {"p", 1}}}};
  d.finite = true;
  return d;
}

inline IdentityDescriptor make_cor_kt() {
  IdentityDescriptor d;
  d.id = "cor_kajihara_bailey";
  d.title = "Bailey-type transformation between U(n) and U(p) sums over |y| = N";
  d.schema = {integer("n"), integer("p"), integer("N"), vec("a", "n"), vec("z", "n"), vec("b", "p"), vec("w", "p")};
  d.constraints = {equality("W = ABZ", [](const ParamSet& ps) { return ps.product("w"); },
                            [](const ParamSet& ps) { return ps.product("a") * ps.product("b") * ps.product("z"); }),
                   nonneg("N >= 0", {"N"})};
  d.dependent = "w (scaled jointly to W = ABZ)";
  d.lhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const auto &a = ps.vec("a"), &z = ps.vec("z"), &b = ps.vec("b"), &w = ps.vec("w");
    const size_t n = z.size();
    TermSpec t(n, Mode::q, q, ps.bits());
    t.vandermonde(z);
    for (size_t k = 0; k < n; ++k) {
      for (size_t i = 0; i < n; ++i) t.num(a[i] * z[k], yk(n, k)).den(q.value() * z[k] / z[i], yk(n, k));
      for (size_t i = 0; i < b.size(); ++i) t.num(b[i] * z[k], yk(n, k)).den(w[i] * z[k], yk(n, k));
    }
    return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), layer(n, ps.integer("N"))}};
  };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const auto &a = ps.vec("a"), &z = ps.vec("z"), &b = ps.vec("b"), &w = ps.vec("w");
    const size_t p = w.size();
    TermSpec t(p, Mode::q, q, ps.bits());
    t.vandermonde(w);
    for (size_t i = 0; i < p; ++i) {
      for (size_t k = 0; k < p; ++k) t.num(w[i] / b[k], yk(p, i)).den(q.value() * w[i] / w[k], yk(p, i));
      for (size_t k = 0; k < z.size(); ++k) t.num(w[i] / a[k], yk(p, i)).den(w[i] * z[k], yk(p, i));
    }
    return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), layer(p, ps.integer("N"))}};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    long n = dr.dim("n", cfg.n, 1, 3), p = dr.dim("p", cfg.p, 1, 3);
    ps.set_int("n", n);
    ps.set_int("p", p);
    ps.set_int("N", offset(dr, "N", 6));
    auto a = dr.free(static_cast<size_t>(n));
    auto z = dr.free(static_cast<size_t>(n));
    auto b = dr.free(static_cast<size_t>(p));
    HValue W = prod(a, dr.bits()) * prod(b, dr.bits()) * prod(z, dr.bits());
    ps.set_vec("w", free_with_product(dr, static_cast<size_t>(p), W));
    ps.set_vec("a", std::move(a));
    ps.set_vec("z", std::move(z));
    ps.set_vec("b", std::move(b));
    return ps;
  };
  d.degenerations = {{"N=0", {{"N", 0}}}, {"n=p=2", {{"n", 2}, {"p", 2}}}, {"n=1", {{"n", 1}}}};
  d.finite = true;
  return d;
}

// ---- Milne ---------------------------------------------------------------------

inline IdentityDescriptor make_cor_mc() {
  IdentityDescriptor d;
  d.id = "cor_milne_saalschutz";
  d.title = "Multivariable q-Saalschutz summation";
  d.schema = {integer("n"), scalar("a"), scalar("b"), scalar("c"), scalar("d"), vec("z", "n"), ivec("m", "n")};
  d.constraints = {equality("q^{1-|m|} ab = cd",
                            [](const ParamSet& ps) {
                              return ps.q().pow(1 - ps.int_sum("m")) * ps.scalar("a") * ps.scalar("b");
                            },
                            [](const ParamSet& ps) { return ps.scalar("c") * ps.scalar("d"); }),
                   nonneg("m_i >= 0", {"m"})};
  d.dependent = "c and d (product placed, split evenly)";
  d.lhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const auto& z = ps.vec("z");
    const auto& m = ps.ints("m");
    const size_t n = z.size();
    TermSpec t = box_skeleton(z, m, q, true);
    t.num(ps.scalar("a"), ytot(n)).den(ps.scalar("c"), ytot(n));
    for (size_t i = 0; i < n; ++i) t.num(ps.scalar("b") * z[i], yk(n, i)).den(ps.scalar("d") * z[i], yk(n, i));
    return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), Domain::box(m)}};
  };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const auto& z = ps.vec("z");
    const auto& m = ps.ints("m");
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &dd = ps.scalar("d");
    const long M = total(m);
    Prefactor pre(Mode::q, q, ps.bits());
    pre.poch(dd / b, M).poch_den(dd / (a * b), M);
    for (size_t i = 0; i < z.size(); ++i) pre.poch(dd * z[i] / a, m[i]).poch_den(dd * z[i], m[i]);
    return Side{std::move(pre), std::nullopt};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    long n = dr.dim("n", cfg.n, 1, 3);
    ps.set_int("n", n);
    ps.set_vec("z", dr.free(static_cast<size_t>(n)));
    ps.set_ints("m", dr.mvec(static_cast<size_t>(n)));
    HValue a = dr.free(), b = dr.free();
    std::vector<HValue> cd = {dr.free(), dr.free()};
    rescale_to_product(cd, ps.q().pow(1 - total(ps.ints("m"))) * a * b, dr.bits());
    ps.set("a", std::move(a));
    ps.set("b", std::move(b));
    ps.set("c", cd[0]);
    ps.set("d", cd[1]);
    return ps;
  };
  d.degenerations = {{"n=1", {{"n", 1}}}, {"m=0", {{"m_zero", 1}}}, {"some m_i=0", {{"m_some_zero", 1}, {"n", 2}}}};
  d.finite = true;
  return d;
}

inline IdentityDescriptor make_cor_cmd() {
  IdentityDescriptor d;
  d.id = "cor_milne_dougall";
  d.title = "Multivariable q-Dougall summation over |x| = N";
  d.schema = {integer("n"), integer("N"), scalar("d"), vec("z", "n"), vec("e", "n")};
  d.constraints = {nonneg("N >= 0", {"N"})};
  d.dependent = "none";
  d.lhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const auto &z = ps.vec("z"), &e = ps.vec("e");
    const HValue& dd = ps.scalar("d");
    const HValue E = ps.product("e");
    const size_t n = z.size();
    TermSpec t(n, Mode::q, q, ps.bits());
    t.vandermonde(z);
    for (size_t i = 0; i < n; ++i) {
      t.num(dd * z[i] / E, yk(n, i)).den(dd * z[i], yk(n, i));
      for (size_t k = 0; k < n; ++k) t.num(e[k] * z[i] / z[k], yk(n, i)).den(q.value() * z[i] / z[k], yk(n, i));
    }
    return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), layer(n, ps.integer("N"))}};
  };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const auto &z = ps.vec("z"), &e = ps.vec("e");
    const HValue& dd = ps.scalar("d");
    const long N = ps.integer("N");
    Prefactor pre(Mode::q, q, ps.bits());
    pre.poch(ps.product("e"), N).poch_den(q.value(), N);
    for (size_t i = 0; i < z.size(); ++i) pre.poch(dd * z[i] / e[i], N).poch_den(dd * z[i], N);
    return Side{std::move(pre), std::nullopt};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    long n = dr.dim("n", cfg.n, 1, 3);
    ps.set_int("n", n);
    ps.set_int("N", offset(dr, "N", 6));
    ps.set("d", dr.free());
    ps.set_vec("z", dr.free(static_cast<size_t>(n)));
    ps.set_vec("e", dr.free(static_cast<size_t>(n)));
    return ps;
  };
  d.degenerations = {{"N=0", {{"N", 0}}}, {"n=1", {{"n", 1}}}};
  d.finite = true;
  return d;
}

// ---- Sears-type and 10W9 transformations ----------------------------------------------

inline IdentityDescriptor make_cor_mnc() {
  IdentityDescriptor d;
  d.id = "cor_mnc";
  d.title = "Multivariable analogue of Sears' balanced 4phi3 transformation";
  d.schema = {integer("n"), scalar("a"),  scalar("b"),  scalar("c"), scalar("d"),
              scalar("e"),  scalar("f"), vec("z", "n"), ivec("m", "n")};
  d.constraints = {equality("q^{1-|m|} abc = def",
                            [](const ParamSet& ps) {
                              return ps.q().pow(1 - ps.int_sum("m")) * ps.scalar("a") * ps.scalar("b") * ps.scalar("c");
                            },
                            [](const ParamSet& ps) { return ps.scalar("d") * ps.scalar("e") * ps.scalar("f"); }),
                   nonneg("m_i >= 0", {"m"})};
  d.dependent = "d, e, f (product placed, split evenly)";
  d.lhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const auto& z = ps.vec("z");
    const auto& m = ps.ints("m");
    const size_t n = z.size();
    TermSpec t = box_skeleton(z, m, q, true);
    t.num(ps.scalar("a"), ytot(n)).den(ps.scalar("d"), ytot(n));
    for (size_t i = 0; i < n; ++i) {
      t.num(ps.scalar("b") * z[i], yk(n, i)).num(ps.scalar("c") * z[i], yk(n, i));
      t.den(ps.scalar("e") * z[i], yk(n, i)).den(ps.scalar("f") * z[i], yk(n, i));
    }
    return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), Domain::box(m)}};
  };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const auto& z = ps.vec("z");
    const auto& m = ps.ints("m");
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &c = ps.scalar("c"), &dd = ps.scalar("d"),
                 &e = ps.scalar("e"), &f = ps.scalar("f");
    const size_t n = z.size();
    const long M = total(m);
    const HValue s = q.pow(1 - M);
    Prefactor pre(Mode::q, q, ps.bits());
    pre.poch(f / b, M).poch_den(s / dd, M);
    for (size_t i = 0; i < n; ++i) pre.poch(s * b * z[i] / dd, m[i]).poch_den(f * z[i], m[i]);
    TermSpec t = box_skeleton(z, m, q, true);
    t.num(e / c, ytot(n)).den(s * b / f, ytot(n));
    for (size_t i = 0; i < n; ++i) {
      t.num(b * z[i], yk(n, i)).num(e * z[i] / a, yk(n, i));
      t.den(e * z[i], yk(n, i)).den(s * b * z[i] / dd, yk(n, i));
    }
    return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    long n = dr.dim("n", cfg.n, 1, 3);
    ps.set_int("n", n);
    ps.set_vec("z", dr.free(static_cast<size_t>(n)));
    ps.set_ints("m", dr.mvec(static_cast<size_t>(n)));
    HValue a = dr.free(), b = dr.free(), c = dr.free();
    std::vector<HValue> def = dr.free(3);
    rescale_to_product(def, ps.q().pow(1 - total(ps.ints("m"))) * a * b * c, dr.bits());
    ps.set("a", std::move(a));
    ps.set("b", std::move(b));
    ps.set("c", std::move(c));
    ps.set("d", def[0]);
    ps.set("e", def[1]);
    ps.set("f", def[2]);
    return ps;
  };
  d.degenerations = {{"n=1", {{"n", 1}}}, {"m=0", {{"m_zero", 1}}}, {"some m_i=0", {{"m_some_zero", 1}, {"n", 2}}}};
  d.finite = true;
  return d;
}

/// |x| = N box sum with pairs (b z_i, q^L e z_i) / (e z_i, q^{L-|m|} b z_i).
inline Series pbt_layer(const ParamSet& ps, long N, long L) {
  const QBase& q = ps.q();
  const auto& z = ps.vec("z");
  const auto& m = ps.ints("m");
  const HValue &b = ps.scalar("b"), &e = ps.scalar("e");
  const long M = total(m);
  const size_t n = z.size();
  TermSpec t = box_skeleton(z, m, q, false);
  for (size_t i = 0; i < n; ++i) {
    t.num(b * z[i], yk(n, i)).num(q.pow(L) * e * z[i], yk(n, i));
    t.den(e * z[i], yk(n, i)).den(q.pow(L - M) * b * z[i], yk(n, i));
  }
  return Series{std::move(t), Domain::box_hyperplane(m, N)};
}

inline IdentityDescriptor make_eq_pbt() {
  IdentityDescriptor d;
  d.id = "eq_pbt";
  d.title = "Exchange of the layer offsets N and L in a terminating U(n) 10W9 series";
  d.schema = {integer("n"), integer("N"), integer("L"), scalar("b"), scalar("e"), vec("z", "n"), ivec("m", "n")};
  d.constraints = {nonneg("N, L, m_i >= 0", {"N", "L", "m"})};
  d.dependent = "none";
  d.lhs = [](const ParamSet& ps) {
    return Side{Prefactor(Mode::q, ps.q(), ps.bits()), pbt_layer(ps, ps.integer("N"), ps.integer("L"))};
  };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const auto& z = ps.vec("z");
    const auto& m = ps.ints("m");
    const long N = ps.integer("N"), L = ps.integer("L"), M = total(m);
    const HValue& b = ps.scalar("b");
    Prefactor pre(Mode::q, q, ps.bits());
    pre.poch(q.value(), L).poch(q.pow(-M), N).poch_den(q.value(), N).poch_den(q.pow(-M), L);
    for (size_t i = 0; i < z.size(); ++i) pre.poch(q.pow(N - M) * b * z[i], m[i]).poch_den(q.pow(L - M) * b * z[i], m[i]);
    return Side{std::move(pre), pbt_layer(ps, L, N)};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    long n = dr.dim("n", cfg.n, 1, 3);
    ps.set_int("n", n);
    ps.set_vec("z", dr.free(static_cast<size_t>(n)));
    ps.set_ints("m", dr.mvec(static_cast<size_t>(n)));
    const long M = total(ps.ints("m"));
    // layers beyond |m| are empty on both sides
    ps.set_int("N", std::min(offset(dr, "N", M), M));
    ps.set_int("L", std::min(offset(dr, "L", M), M));
    ps.set("b", dr.free());
    ps.set("e", dr.free());
    return ps;
  };
  d.degenerations = {{"N=L", {{"N", 1}, {"L", 1}}}, {"N=0", {{"N", 0}}}, {"n=1", {{"n", 1}}}};
  d.finite = true;
  return d;
}

inline HValue mnb_lambda(const ParamSet& ps) {
  const HValue& a = ps.scalar("a");
  return ps.q().value() * a * a / (ps.scalar("b") * ps.scalar("e") * ps.scalar("f"));
}

inline IdentityDescriptor make_cor_mnb() {
  IdentityDescriptor d;
  d.id = "cor_mnb";
  d.title = "Multivariable terminating 10W9 transformation";
  d.schema = {integer("n"), scalar("a"), scalar("b"), scalar("c"), scalar("d"), scalar("e"),
              scalar("f"),  scalar("g"), vec("z", "n"), ivec("m", "n")};
  d.constraints = {equality("bcdefg = a^3 q^{2+|m|}",
                            [](const ParamSet& ps) {
                              HValue v = ps.scalar("b");
                              for (const char* nm : {"c", "d", "e", "f", "g"}) v *= ps.scalar(nm);
                              return v;
                            },
                            [](const ParamSet& ps) {
                              return pow(ps.scalar("a"), 3) * ps.q().pow(2 + ps.int_sum("m"));
                            }),
                   nonneg("m_i >= 0", {"m"})};
  d.dependent = "b, c, d, e, f, g (product placed, split evenly)";
  d.lhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const HValue& Q = q.value();
    const auto& z = ps.vec("z");
    const auto& m = ps.ints("m");
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &c = ps.scalar("c"), &dd = ps.scalar("d"),
                 &e = ps.scalar("e"), &f = ps.scalar("f"), &g = ps.scalar("g");
    const size_t n = z.size();
    const Affine tot = ytot(n);
    TermSpec t = box_skeleton(z, m, q, true);
    for (size_t i = 0; i < n; ++i) {
      t.well_poised(a * z[i], yk(n, i) + tot);
      t.num(b * z[i], yk(n, i)).num(c * z[i], yk(n, i)).num(dd * z[i], yk(n, i));
      t.den(a * Q * z[i] / e, yk(n, i)).den(a * Q * z[i] / f, yk(n, i)).den(a * Q * z[i] / g, yk(n, i));
      t.num(a * z[i], tot).den(q.pow(1 + m[i]) * a * z[i], tot);
    }
    t.num(e, tot).num(f, tot).num(g, tot).den(a * Q / b, tot).den(a * Q / c, tot).den(a * Q / dd, tot);
    return Side{Prefactor(Mode::q, q, ps.bits()), Series{std::move(t), Domain::box(m)}};
  };
  d.rhs = [](const ParamSet& ps) {
    const QBase& q = ps.q();
    const HValue& Q = q.value();
    const auto& z = ps.vec("z");
    const auto& m = ps.ints("m");
    const HValue &a = ps.scalar("a"), &b = ps.scalar("b"), &c = ps.scalar("c"), &dd = ps.scalar("d"),
                 &e = ps.scalar("e"), &f = ps.scalar("f"), &g = ps.scalar("g");
    const HValue lam = mnb_lambda(ps);
    const size_t n = z.size();
    const long M = total(m);
    Prefactor pre(Mode::q, q, ps.bits());
    pre.power(a / lam, M).poch(lam * Q / c, M).poch(lam * Q / dd, M).poch_den(a * Q / c, M).poch_den(a * Q / dd, M);
    for (size_t i = 0; i < n; ++i) {
      pre.poch(a * Q * z[i], m[i]).poch(lam * Q * z[i] / g, m[i]);
      pre.poch_den(lam * Q * z[i], m[i]).poch_den(a * Q * z[i] / g, m[i]);
    }
    const Affine tot = ytot(n);
    TermSpec t = box_skeleton(z, m, q, true);
    for (size_t i = 0; i < n; ++i) {
      t.well_poised(lam * z[i], yk(n, i) + tot);
      t.num(a * Q * z[i] / (e * f), yk(n, i)).num(c * z[i], yk(n, i)).num(dd * z[i], yk(n, i));
      t.den(a * Q * z[i] / e, yk(n, i)).den(a * Q * z[i] / f, yk(n, i)).den(lam * Q * z[i] / g, yk(n, i));
      t.num(lam * z[i], tot).den(q.pow(1 + m[i]) * lam * z[i], tot);
    }
    t.num(a * Q / (b * e), tot).num(a * Q / (b * f), tot).num(g, tot);
    t.den(a * Q / b, tot).den(lam * Q / c, tot).den(lam * Q / dd, tot);
    return Side{std::move(pre), Series{std::move(t), Domain::box(m)}};
  };
  d.draw = [](Draw& dr) {
    const auto& cfg = dr.cfg();
    ParamSet ps(dr.bits());
    ps.set_q(dr.base());
    long n = dr.dim("n", cfg.n, 1, 3);
    ps.set_int("n", n);
    ps.set_vec("z", dr.free(static_cast<size_t>(n)));
    ps.set_ints("m", dr.mvec(static_cast<size_t>(n)));
    HValue a = dr.free();
    std::vector<HValue> g = dr.free(6);
    rescale_to_product(g, pow(a, 3) * ps.q().pow(2 + total(ps.ints("m"))), dr.bits());
    ps.set("a", std::move(a));
    const char* names[] = {"b", "c", "d", "e", "f", "g"};
    for (size_t i = 0; i < 6; ++i) ps.set(names[i], g[i]);
    return ps;
  };
  d.degenerations = {{"n=1", {{"n", 1}}}, {"m=0", {{"m_zero", 1}}}, {"some m_i=0", {{"m_some_zero", 1}, {"n", 2}}}};
  d.finite = true;
  return d;
}

}  // namespace kmv::build
