#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corelect/instance.hpp"
#include "corelect/rational.hpp"

namespace corelect {

/// Complete search for an integral committee meeting the utility demands u
/// (negative entries are vacuous). Depth-first over per-type counts with
/// LP-relaxation pruning; absent means no witness exists.
std::optional<Committee> oracle_integral_feasible(const Instance& instance,
                                                 const UtilityVector& u);

/// Rounds a fractional committee x to an integral one, keeping every
/// per-type amount within floor/ceiling of x_R and every voter's utility at
/// least the floor of their fractional utility. Requires n <= 5.
Committee round_committee(const Instance& instance, const Committee& x);

/// Floors the utility vector of x and produces an integral committee
/// realizing it (via round_committee).
std::pair<UtilityVector, Committee> round_utilities(const Instance& instance,
                                                    const Committee& x);

struct IntegralizabilityReport {
  bool integralizable = true;
  // Lexicographically smallest utility vector that is fractionally but not
  // integrally feasible, with its fractional witness.
  std::optional<std::pair<UtilityVector, Committee>> counterexample;
};

/// Tests whether every fractionally feasible integer utility vector is also
/// integrally feasible, by enumeration up to the configured cap.
IntegralizabilityReport check_integralizability(const Instance& instance,
                                                long long cap = 10000000);

/// Searches for an ordering of the active types under which each voter's
/// approved types form a contiguous block. Brute force over permutations
/// with prefix pruning; supports up to 10 active types.
std::optional<std::vector<TypeMask>> is_candidate_interval(const Instance& instance);

/// Generator of the committee election monoid in ambient dimension
/// (2^n - 1) + 1 + n: supply coordinates per type, one size coordinate,
/// and n utility coordinates.
struct MonoidGenerator {
  enum class Kind { X, Z, T, S };
  Kind kind;
  TypeMask type = 0;  // set for X and Z
  int voter = -1;     // set for S
  std::vector<long> coords;
};

/// All 2(2^n - 1) + 1 + n generators in canonical order: X_R for every
/// type, then Z_R, then T, then S_1..S_n; types sorted by cardinality and
/// lexicographically within.
std::vector<MonoidGenerator> monoid_generators(int n);

/// Normaliz input for the monoid: amb_space/cone headers followed by one
/// generator row each.
std::string emit_normaliz(int n);

struct MonoidDecomposition {
  std::map<TypeMask, long> x, z;
  long t = 0;
  std::vector<long> s;
};

/// Decides monoid membership of an integer point by decoding it as
/// (c, k, u) and searching for an integral committee realizing u; returns
/// the generator multiplicities on success.
std::optional<MonoidDecomposition> monoid_member(int n, const std::vector<long>& point);

}  // namespace corelect
