#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kmv/error.hpp"
#include "kmv/mparith.hpp"

namespace kmv {

/// Named parameters instantiating one identity: complex scalars and
/// vectors, integers and integer vectors, and the base q (absent for
/// classical identities).
class ParamSet {
 public:
  explicit ParamSet(Bits bits) : bits_(bits) {}

  Bits bits() const { return bits_; }

  void set_q(const HValue& q) { q_.emplace(q); }
  bool has_q() const { return q_.has_value(); }
  const QBase& q() const {
    if (!q_) throw Error(ErrorCode::invalid_argument, "parameter set has no base q");
    return *q_;
  }

  void set(const std::string& name, HValue v) { check(v), scalars_.insert_or_assign(name, std::move(v)); }
  void set_vec(const std::string& name, std::vector<HValue> v) {
    for (const auto& x : v) check(x);
    vectors_.insert_or_assign(name, std::move(v));
  }
  void set_int(const std::string& name, long v) { integers_.insert_or_assign(name, v); }
  void set_ints(const std::string& name, std::vector<long> v) { int_vectors_.insert_or_assign(name, std::move(v)); }

  const HValue& scalar(const std::string& name) const { return find(scalars_, name, "scalar"); }
  const std::vector<HValue>& vec(const std::string& name) const { return find(vectors_, name, "vector"); }
  long integer(const std::string& name) const { return find(integers_, name, "integer"); }
  const std::vector<long>& ints(const std::string& name) const { return find(int_vectors_, name, "integer vector"); }

  bool has_scalar(const std::string& name) const { return scalars_.count(name) != 0; }
  bool has_vec(const std::string& name) const { return vectors_.count(name) != 0; }
  bool has_integer(const std::string& name) const { return integers_.count(name) != 0; }
  bool has_ints(const std::string& name) const { return int_vectors_.count(name) != 0; }

  /// Product of the coordinates of a vector (the capital-letter convention).
  HValue product(const std::string& name) const {
    HValue p(bits_, 1);
    for (const auto& x : vec(name)) p *= x;
    return p;
  }
  /// Sum of the coordinates of a vector.
  HValue sum(const std::string& name) const {
    HValue s(bits_);
    for (const auto& x : vec(name)) s += x;
    return s;
  }
  long int_sum(const std::string& name) const {
    long s = 0;
    for (long v : ints(name)) s += v;
    return s;
  }

  const std::map<std::string, HValue>& scalars() const { return scalars_; }
  const std::map<std::string, std::vector<HValue>>& vectors() const { return vectors_; }
  const std::map<std::string, long>& integers() const { return integers_; }
  const std::map<std::string, std::vector<long>>& int_vectors() const { return int_vectors_; }
  const std::optional<QBase>& q_optional() const { return q_; }

 private:
  void check(const HValue& v) const {
    if (v.bits() != bits_) throw Error(ErrorCode::precision_mismatch, "parameter precision differs from set");
  }
  template <class M>
  static const typename M::mapped_type& find(const M& m, const std::string& name, const char* what) {
    auto it = m.find(name);
    if (it == m.end()) throw Error(ErrorCode::invalid_argument, std::string("missing ") + what + " '" + name + "'");
    return it->second;
  }

  Bits bits_;
  std::optional<QBase> q_;
  std::map<std::string, HValue> scalars_;
  std::map<std::string, std::vector<HValue>> vectors_;
  std::map<std::string, long> integers_;
  std::map<std::string, std::vector<long>> int_vectors_;
};

}  // namespace kmv
