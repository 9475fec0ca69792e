#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pgroup/pc.hpp"

namespace pgroup {

using GroupPtr = std::shared_ptr<const Group>;

/// A subgroup stored by its induced generating sequence in reduced echelon
/// form: depths strictly increase, every leading exponent is 1, and each
/// element has exponent 0 at the depths of the others.  That form is unique
/// per subgroup, so equality is igs equality.
class Subgroup {
 public:
  explicit Subgroup(GroupPtr group);  // trivial subgroup
  static Subgroup whole(GroupPtr group);

  const Group& group() const { return *group_; }
  const GroupPtr& group_ptr() const { return group_; }
  const std::vector<GroupElement>& igs() const { return igs_; }
  const std::vector<int>& depths() const { return depths_; }

  int log_order() const { return static_cast<int>(igs_.size()); }
  std::uint64_t order() const;
  bool is_trivial() const { return igs_.empty(); }
  bool is_whole() const { return log_order() == group_->ngens(); }
  bool is_normal() const { return normal_; }

  /// Residue of x after stripping leading exponents against the igs.
  GroupElement sift(const GroupElement& x) const;
  bool contains(const GroupElement& x) const { return sift(x).is_identity(); }
  bool contains(const Subgroup& other) const;

  /// Visits every element once.  Throws CapExceeded when |H| exceeds the
  /// ambient enumeration cap.
  void for_each_element(const std::function<void(const GroupElement&)>& fn) const;
  std::vector<GroupElement> elements() const;

  /// Canonical key (the concatenated igs exponents).
  std::string key() const;

  bool operator==(const Subgroup& other) const { return igs_ == other.igs_; }

 private:
  friend class IgsBuilder;
  Subgroup(GroupPtr group, std::vector<GroupElement> igs);

  GroupPtr group_;
  std::vector<GroupElement> igs_;
  std::vector<int> depths_;
  std::vector<GroupElement> inverse_igs_;
  bool normal_ = true;
};

/// Smallest subgroup containing gens.
Subgroup closure(const GroupPtr& group, std::span<const GroupElement> gens);
/// Smallest subgroup containing gens that is normalised by every element
/// of `conjugators` (pass the ambient generators for the normal closure in G).
Subgroup closure(const GroupPtr& group, std::span<const GroupElement> gens,
                 std::span<const GroupElement> conjugators);
/// Normal closure in the whole group.
Subgroup normal_closure(const GroupPtr& group, std::span<const GroupElement> gens);
/// Normal closure inside H; gens must lie in H.
Subgroup normal_closure_in(const Subgroup& within, std::span<const GroupElement> gens);
/// <A, B>
Subgroup join(const Subgroup& a, const Subgroup& b);
/// <A, x>
Subgroup join(const Subgroup& a, const GroupElement& x);

}  // namespace pgroup
