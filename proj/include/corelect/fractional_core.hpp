#pragma once

#include <optional>
#include <utility>

#include "corelect/instance.hpp"
#include "corelect/rational.hpp"

namespace corelect {

/// A fractional committee certified against coalition deviations. The
/// budget may be exceeded by at most epsilon_used in exchange for exact
/// stability.
struct FractionalCorePoint {
  Committee x;  // fractional, respects supplies, size <= k + epsilon_used
  Rat epsilon_used;
  bool verified = false;
};

/// Computes a fractional committee of size at most k + epsilon that no
/// non-empty coalition can block with a fractional deviation inside its
/// budget. Floating-point ascent on a smoothed proportional-fairness
/// objective, followed by a per-voter residual bump and an exact
/// verification pass; retries with tighter tolerances until the verifier
/// accepts. Throws convergence_error if the optimizer never produces a
/// verifiable point.
FractionalCorePoint approx_fractional_core(const Instance& instance, const Rat& epsilon);

/// Exhaustive blocking check: for each non-empty coalition S in increasing
/// bitmask order, maximizes the minimum utility gain over fractional
/// deviations affordable with budget b(S). Returns the first coalition with
/// a strictly positive optimum together with its deviation, or absent.
std::optional<std::pair<Coalition, Committee>> verify_fractional_core(const Instance& instance,
                                                                      const Committee& x);

}  // namespace corelect
