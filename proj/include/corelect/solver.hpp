#pragma once

#include <vector>

#include "corelect/instance.hpp"
#include "corelect/rational.hpp"

namespace corelect {

/// Audit trail of a core computation.
struct SolveReport {
  Committee committee;       // integral, in W
  UtilityVector utilities;   // utility(committee)
  Committee fractional_point;  // the certified fractional point used
  Rat epsilon;
  std::vector<int> pareto_order;  // empty when no Pareto pass ran
};

/// Core committee for n <= 5: approximate fractional core point, floored
/// utilities, minimum-size fractional witness, integral rounding.
SolveReport solve_core(const Instance& instance);

/// Serial dictatorship on utility vectors: voters in `order` greedily
/// raise their utility while the vector stays fractionally feasible at
/// budget k. Returns the resulting maximal vector.
UtilityVector pareto_improve(const Instance& instance, const UtilityVector& u,
                             const std::vector<int>& order);

/// solve_core followed by pareto_improve and a fresh rounding; the result
/// is in the core and Pareto-optimal.
SolveReport solve_core_pareto(const Instance& instance, const std::vector<int>& order);

/// Direct n = 3 solver: unanimous candidates with equal cost splits, then
/// pair candidates by maximal minimum remaining budget, then singleton
/// purchases, then top-up to size exactly k. Requires total supply >= k.
Committee solve_core_n3(const Instance& instance);

}  // namespace corelect
