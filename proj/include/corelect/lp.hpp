#pragma once

#include <optional>
#include <vector>

#include "corelect/instance.hpp"
#include "corelect/rational.hpp"

namespace corelect {

enum class Rel { Le, Ge, Eq };

/// Exact rational linear program. Bounds default to [0, +inf); an absent
/// lower bound means -inf, an absent upper bound means +inf.
struct LinearProgram {
  struct Row {
    std::vector<Rat> coeffs;  // one per variable
    Rel rel = Rel::Le;
    Rat rhs = 0;
  };

  int num_vars = 0;
  std::vector<std::optional<Rat>> lower;  // defaults filled by add helpers
  std::vector<std::optional<Rat>> upper;
  std::vector<Row> rows;
  bool maximize = false;
  std::vector<Rat> objective;  // empty => pure feasibility

  /// Adds a variable with the given bounds, returns its index.
  int add_var(std::optional<Rat> lo = Rat(0), std::optional<Rat> hi = std::nullopt);
  void add_row(std::vector<Rat> coeffs, Rel rel, Rat rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Rat value = 0;                  // meaningful iff Optimal
  std::vector<Rat> solution;      // basic feasible solution iff Optimal
};

/// Two-phase simplex with Bland's anti-cycling rule, exact rationals
/// throughout. Feasibility-only programs report Optimal with value 0.
LpOutcome solve_lp(const LinearProgram& lp);

/// Feasibility of the fractional-committee system: sum_{R∋i} x_R >= u_i,
/// sum x_R <= budget, 0 <= x_R <= c_R. Returns a witness committee.
std::optional<Committee> fractional_feasible(const Instance& instance, const UtilityVector& u,
                                             const Rat& budget);
inline std::optional<Committee> fractional_feasible(const Instance& instance,
                                                    const UtilityVector& u) {
  return fractional_feasible(instance, u, Rat(instance.k));
}

/// Minimum fractional committee size realizing u, ignoring the budget cap.
/// Absent when even the uncapped demand system is infeasible.
struct TauResult {
  Rat value;
  Committee witness;  // fractional witness of size exactly value
};
std::optional<TauResult> tau(const Instance& instance, const UtilityVector& u);

/// lcm of |det B| over invertible binary square matrices of order <= n.
/// Enumerates matrices up to row permutation; supported for 1 <= n <= 5.
Int compute_L(int n);

}  // namespace corelect
