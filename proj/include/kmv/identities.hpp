#pragma once

// Registry of identities: descriptor lookup, schema and constraint checks,
// and side evaluation.

#include <string>
#include <string_view>
#include <vector>

#include "kmv/identities/classical.hpp"
#include "kmv/identities/core.hpp"
#include "kmv/identities/finite.hpp"
#include "kmv/identities/hyperplane.hpp"
#include "kmv/identities/lattice.hpp"
#include "kmv/identities/wellpoised.hpp"

namespace kmv {

namespace detail {

inline IdentityDescriptor finalize(IdentityDescriptor d) {
  d.constraints.push_back(build::nonvanishing(d.lhs, d.rhs, TruncationPolicy{}.radius));
  return d;
}

inline std::vector<IdentityDescriptor> make_registry() {
  using namespace build;
  std::vector<IdentityDescriptor> r;
  for (auto f : {make_gustafson, make_thm1, make_thm1_shifted, make_cor_c1, make_cor_st, make_cor_csc,
                 make_cor_chu_un, make_cor_pk, make_cor_pkb, make_cor_kc, make_cor_kt, make_cor_mc, make_cor_cmd,
                 make_cor_c2, make_cor_c3, make_cor_2l, make_cor_3l, make_cor_mnc, make_eq_pbt, make_cor_mnb,
                 make_cor_c1p, make_cor_cn, make_cor_cmn, make_cl_km, make_cl_kmg, make_cl_us, make_cl_5h5,
                 make_cl_2h2, make_cl_thm_a, make_cl_thm_b, make_cl_bi, make_cl_3h3}) {
    r.push_back(finalize(f()));
  }
  return r;
}

}  // namespace detail

inline const std::vector<IdentityDescriptor>& list_identities() {
  static const std::vector<IdentityDescriptor> registry = detail::make_registry();
  return registry;
}

inline const IdentityDescriptor& lookup(std::string_view id) {
  for (const auto& d : list_identities()) {
    if (d.id == id) return d;
  }
  throw Error(ErrorCode::unknown_identity, "no identity '" + std::string(id) + "'");
}

inline const std::vector<Constraint>& constraints(std::string_view id) { return lookup(id).constraints; }

/// Throws InvalidArgument when a schema slot is missing or has the wrong length.
inline void validate_schema(const IdentityDescriptor& d, const ParamSet& ps) {
  for (const auto& e : d.schema) {
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::invalid_argument, d.id + ": parameter '" + e.name + "' " + why);
    };
    switch (e.kind) {
      case SlotKind::scalar:
        if (!ps.has_scalar(e.name)) fail("is missing");
        break;
      case SlotKind::integer:
        if (!ps.has_integer(e.name)) fail("is missing");
        break;
      case SlotKind::vector:
        if (!ps.has_vec(e.name)) fail("is missing");
        if (static_cast<long>(ps.vec(e.name).size()) != e.size(ps)) fail("must have length " + e.length);
        break;
      case SlotKind::int_vector:
        if (!ps.has_ints(e.name)) fail("is missing");
        if (static_cast<long>(ps.ints(e.name).size()) != e.size(ps)) fail("must have length " + e.length);
        break;
    }
  }
  if ((d.mode == Mode::q) != ps.has_q()) {
    throw Error(ErrorCode::invalid_argument, d.id + ": base q must be present exactly in q-mode");
  }
}

/// First violated constraint, or nullptr.
inline const Constraint* violated_constraint(const IdentityDescriptor& d, const ParamSet& ps, double margin = 1.0) {
  for (const auto& c : d.constraints) {
    if (!c.satisfied(ps, margin)) return &c;
  }
  return nullptr;
}

inline void require_admissible(const IdentityDescriptor& d, const ParamSet& ps) {
  validate_schema(d, ps);
  if (const Constraint* c = violated_constraint(d, ps)) {
    Measure m = c->measure(ps);
    throw Error(ErrorCode::constraint_violated, d.id + ": " + c->expression + " (measured " +
                                                     std::to_string(m.value) + " against " +
                                                     std::to_string(m.bound) + ")");
  }
}

inline SideValue lhs_eval(std::string_view id, const ParamSet& ps, const TruncationPolicy& policy) {
  const auto& d = lookup(id);
  require_admissible(d, ps);
  return evaluate_side(d.lhs(ps), policy);
}

inline SideValue rhs_eval(std::string_view id, const ParamSet& ps, const TruncationPolicy& policy) {
  const auto& d = lookup(id);
  require_admissible(d, ps);
  return evaluate_side(d.rhs(ps), policy);
}

}  // namespace kmv
