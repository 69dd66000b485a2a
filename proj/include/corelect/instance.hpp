#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corelect/rational.hpp"
#include "corelect/types.hpp"

namespace corelect {

/// A committee election instance over voter types: supplies c_R per
/// candidate type, committee size k, and rational voter budgets summing
/// to k exactly.
struct Instance {
  int n = 0;
  long k = 0;
  std::map<TypeMask, long> supply;
  std::vector<Rat> budgets;

  /// Active types (c_R > 0) in canonical order.
  std::vector<TypeMask> active_types() const;

  long supply_of(TypeMask r) const {
    auto it = supply.find(r);
    return it == supply.end() ? 0 : it->second;
  }

  /// Upper bound on voter i's utility: sum of approved supplies.
  long approved_supply(int voter) const;

  /// Throws precondition_error on malformed data (budget sum != k,
  /// negative supplies, out-of-range types).
  void validate() const;
};

struct Committee {
  std::map<TypeMask, Rat> amounts;
  bool integral = true;

  Rat amount_of(TypeMask r) const {
    auto it = amounts.find(r);
    return it == amounts.end() ? Rat(0) : it->second;
  }
  Rat size() const;
  bool empty() const;
  /// Drops zero entries; asserts integrality when tagged integral.
  void normalize();
};

struct UtilityVector {
  std::vector<Rat> values;
  bool integral = false;

  static UtilityVector of_longs(const std::vector<long>& v);
  std::vector<long> as_longs() const;  // requires integral values
};

struct Coalition {
  CoalitionMask mask = 0;
  std::vector<int> voters() const { return members(mask); }
};

/// Raw approval profile over named candidates.
struct ApprovalProfile {
  long k = 0;
  std::vector<std::string> candidates;
  std::vector<std::set<std::string>> approvals;  // one set per voter
};

/// Result of collapsing an approval profile into a weighted voter-type
/// instance. Voter types are ordered by first occurrence in the profile.
struct ReducedProfile {
  Instance instance;
  std::map<std::string, TypeMask> type_assignment;  // approved candidates only
  std::vector<std::string> approved_order;          // those candidates in input order
};

ReducedProfile reduce_profile(const ApprovalProfile& profile);

UtilityVector utility(const Instance& instance, const Committee& x);

Rat coalition_budget(const Instance& instance, Coalition s);

/// Membership in W_S (integral mode) resp. P_S (fractional mode).
bool is_affordable(const Instance& instance, const Committee& x, Coalition s);

/// Picks x_R concrete candidate names per type, in profile input order.
std::vector<std::string> expand_committee(const ReducedProfile& reduced, const Committee& x);

// --- JSON file formats ---

Instance instance_from_json(const std::string& text);
std::string instance_to_json(const Instance& instance);
ApprovalProfile profile_from_json(const std::string& text);

Instance load_instance(const std::string& path);
ApprovalProfile load_profile(const std::string& path);

}  // namespace corelect
