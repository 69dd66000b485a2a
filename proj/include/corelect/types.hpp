#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace corelect {

// Candidate types and coalitions are subsets of the voter set {0..n-1},
// stored as bitmasks of width n <= 16.
using TypeMask = std::uint32_t;
using CoalitionMask = std::uint32_t;

constexpr int kMaxVoters = 16;

inline int popcount(TypeMask m) { return std::popcount(m); }

inline bool contains(TypeMask type, int voter) { return (type >> voter) & 1u; }

std::vector<int> members(TypeMask m);

/// Canonical type order: cardinality ascending, lexicographic member list
/// within a cardinality. {1,4} sorts before {2,3}.
bool type_less(TypeMask a, TypeMask b);

/// "1,3" (1-based voter indices) for mask 0b101.
std::string type_str(TypeMask m);

/// Inverse of type_str; validates indices against n.
TypeMask parse_type(const std::string& key, int n);

/// All non-empty subsets of {0..n-1} in canonical order.
std::vector<TypeMask> all_types(int n);

}  // namespace corelect
