#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "corelect/instance.hpp"
#include "corelect/rational.hpp"

namespace corelect {

/// Knapsack-style committee model with per-candidate costs and additive
/// valuations; fractional and integral committees may face different
/// budgets.
struct GeneralInstance {
  struct Candidate {
    Rat cost;
    std::vector<Rat> values;  // one per voter
  };
  int n = 0;
  Rat fractional_budget;
  Rat integral_budget;
  std::vector<Candidate> candidates;
};

GeneralInstance general_from_json(const std::string& text);
GeneralInstance load_general(const std::string& path);

struct BlockingCertificate {
  Coalition coalition;
  Committee deviation;            // integral, affordable for the coalition
  std::vector<Rat> utility_gains;  // per coalition member, all positive
};

/// Complete integral core check: coalitions in increasing bitmask order,
/// each searched for a deviation within floor(b(S)) seats maximizing the
/// minimum member gain.
std::optional<BlockingCertificate> verify_core(const Instance& instance, const Committee& x);

/// Searches for an integral committee weakly better for everyone and
/// strictly better for someone; absent means x is Pareto-optimal.
std::optional<Committee> verify_pareto(const Instance& instance, const Committee& x);

/// Proportional Approval Voting: maximizes the sum of harmonic prefix sums
/// of voter utilities over integral committees, exact rationals. Ties go to
/// the lexicographically largest type-count vector in canonical order.
Committee pav(const Instance& instance, long long cap = 10000000);

/// Method of Equal Shares with per-voter budgets from the instance: each
/// round picks the candidate type whose unit cost can be split among its
/// approvers with the smallest maximum payment. No completion rule; the
/// result may have fewer than k members. Optional `priority` overrides the
/// canonical tie-break among minimum-payment types.
Committee mes(const Instance& instance);
Committee mes(const Instance& instance, const std::vector<TypeMask>& priority);

/// Enumerates instances (up to voter permutation) with types of the given
/// cardinalities, supplies up to supply_cap, committee sizes up to k_max,
/// and reports every non-integralizable one with its witness vector.
std::vector<std::pair<Instance, UtilityVector>> search_nonintegralizable(
    int n, long k_max, const std::set<int>& type_sizes, long supply_cap, int jobs = 1,
    long long cap = 10000000);

struct GapReport {
  std::optional<std::vector<Rat>> fractional;  // per-candidate amounts in [0,1]
  std::optional<std::vector<long>> integral;   // 0/1 selections
};

/// Exact feasibility of demands u in the general model, fractionally
/// (budget fractional_budget) and integrally (budget integral_budget).
GapReport feasibility_gap(const GeneralInstance& g, const UtilityVector& u);

}  // namespace corelect
