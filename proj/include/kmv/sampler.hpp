#pragma once

// Seeded generation of admissible parameter sets: every set satisfies all
// constraints (moduli with the configured margin) and clears every
// denominator zero within the planned truncation window.

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "kmv/identities.hpp"
#include "kmv/sampling.hpp"

namespace kmv {

/// Admissibility under the sampler's stricter policy.
inline bool admissible(const IdentityDescriptor& d, const ParamSet& ps, const SampleConfig& cfg) {
  try {
    validate_schema(d, ps);
    for (const auto& c : d.constraints) {
      if (c.kind == ConstraintKind::nonvanishing_denominator) {
        double gap = std::min(build::side_clearance(d.lhs(ps), cfg.radius), build::side_clearance(d.rhs(ps), cfg.radius));
        if (!(gap >= cfg.pole_clearance)) return false;
      } else if (!c.satisfied(ps, cfg.margin)) {
        return false;
      }
    }
    return true;
  } catch (const Error&) {
    return false;
  }
}

namespace detail {

inline std::vector<ParamSet> sample_stream(const IdentityDescriptor& d, const SampleConfig& cfg, size_t count,
                                           Bits bits, std::map<std::string, long> overrides, std::uint64_t salt) {
  cfg.validate();
  Draw dr(cfg, fnv1a(d.id) ^ salt, bits, std::move(overrides));
  std::vector<ParamSet> out;
  int rejected = 0;
  while (out.size() < count) {
    std::optional<ParamSet> ps;
    try {
      ps.emplace(d.draw(dr));
    } catch (const Error&) {
      ps.reset();
    }
    if (ps && admissible(d, *ps, cfg)) {
      out.push_back(std::move(*ps));
      rejected = 0;
    } else if (++rejected >= cfg.max_attempts) {
      throw Error(ErrorCode::exhausted_attempts,
                  d.id + ": no admissible parameters after " + std::to_string(cfg.max_attempts) + " draws");
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<ParamSet> sample(const IdentityDescriptor& d, const SampleConfig& cfg, size_t count,
                                    Bits bits = 256) {
  return detail::sample_stream(d, cfg, count, bits, {}, 0);
}

/// Sets drawn with named overrides (a degenerate case or pinned dimensions).
inline std::vector<ParamSet> sample(const IdentityDescriptor& d, const SampleConfig& cfg, size_t count, Bits bits,
                                    std::map<std::string, long> overrides) {
  return detail::sample_stream(d, cfg, count, bits, std::move(overrides), fnv1a("overrides"));
}

inline std::vector<ParamSet> sample(std::string_view id, const SampleConfig& cfg, size_t count, Bits bits = 256) {
  return sample(lookup(id), cfg, count, bits);
}

struct DegenerateCase {
  std::string name;
  ParamSet params;
};

/// One parameter set per documented degeneration of the identity, drawn
/// with the default configuration and a fixed seed.
inline std::vector<DegenerateCase> degenerate_suite(const IdentityDescriptor& d, Bits bits = 256,
                                                    const SampleConfig& cfg = {}) {
  if (d.degenerations.empty()) throw Error(ErrorCode::no_degenerations, d.id + " has no documented degenerations");
  std::vector<DegenerateCase> out;
  std::uint64_t salt = 0x9e3779b97f4a7c15ull;
  for (const auto& g : d.degenerations) {
    auto sets = detail::sample_stream(d, cfg, 1, bits, g.overrides, salt + fnv1a(g.name));
    out.push_back(DegenerateCase{g.name, std::move(sets.front())});
  }
  return out;
}

inline std::vector<DegenerateCase> degenerate_suite(std::string_view id, Bits bits = 256) {
  return degenerate_suite(lookup(id), bits);
}

}  // namespace kmv
