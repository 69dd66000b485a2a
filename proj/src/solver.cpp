#include "corelect/solver.hpp"

#include <algorithm>
#include <numeric>

#include "corelect/errors.hpp"
#include "corelect/fractional_core.hpp"
#include "corelect/integralization.hpp"
#include "corelect/lp.hpp"

namespace corelect {

namespace {

void check_order(int n, const std::vector<int>& order) {
  std::vector<bool> seen(n, false);
  if ((int)order.size() != n) throw precondition_error("order must list every voter once");
  for (int i : order) {
    if (i < 0 || i >= n || seen[i]) throw precondition_error("order must list every voter once");
    seen[i] = true;
  }
}

// Shared tail of both solve routines: realize the integer utility vector u
// by a minimum-size fractional witness, then round it.
Committee realize(const Instance& instance, const UtilityVector& u) {
  auto t = tau(instance, u);
  if (!t) throw invariant_error("floored utility vector lost fractional feasibility");
  if (t->value > instance.k)
    throw invariant_error("tau exceeds the budget despite the denominator bound");
  return round_committee(instance, t->witness);
}

UtilityVector floor_utilities(const Instance& instance, const Committee& x) {
  auto u = utility(instance, x);
  UtilityVector floors;
  floors.integral = true;
  for (const Rat& v : u.values) floors.values.emplace_back(floor_rat(v));
  return floors;
}

}  // namespace

SolveReport solve_core(const Instance& instance) {
  if (instance.n > 5) throw unsupported_error("core computation requires at most 5 voter types");
  Rat epsilon(1, to_long(compute_L(instance.n)) + 1);

  auto point = approx_fractional_core(instance, epsilon);
  UtilityVector u = floor_utilities(instance, point.x);

  // Sanity: the relaxed point overshoots the budget by less than one
  // denominator unit, so the floored vector fits within k exactly.
  auto t = tau(instance, u);
  if (!t || t->value > Rat(instance.k) + epsilon)
    throw invariant_error("floored utilities are not nearly affordable");

  SolveReport report;
  report.committee = realize(instance, u);
  report.utilities = utility(instance, report.committee);
  report.utilities.integral = true;
  report.fractional_point = std::move(point.x);
  report.epsilon = epsilon;
  return report;
}

UtilityVector pareto_improve(const Instance& instance, const UtilityVector& u,
                             const std::vector<int>& order) {
  check_order(instance.n, order);
  if (!fractional_feasible(instance, u, Rat(instance.k)))
    throw precondition_error("starting utility vector is not fractionally feasible");

  UtilityVector out = u;
  for (int i : order) {
    while (true) {
      UtilityVector probe = out;
      probe.values[i] += 1;
      if (!fractional_feasible(instance, probe, Rat(instance.k))) break;
      out = std::move(probe);
    }
  }
  return out;
}

SolveReport solve_core_pareto(const Instance& instance, const std::vector<int>& order) {
  SolveReport report = solve_core(instance);
  UtilityVector u = floor_utilities(instance, report.fractional_point);
  UtilityVector improved = pareto_improve(instance, u, order);
  report.committee = realize(instance, improved);
  report.utilities = utility(instance, report.committee);
  report.utilities.integral = true;
  report.pareto_order = order;
  return report;
}

Committee solve_core_n3(const Instance& instance) {
  if (instance.n != 3) throw precondition_error("this solver handles exactly 3 voters");
  long total_supply = 0;
  for (const auto& [r, c] : instance.supply) total_supply += c;
  if (total_supply < instance.k)
    throw precondition_error("total supply must cover the committee size");

  // Relabel voters so that B[0] >= B[1] >= B[2]; perm[p] = original voter.
  std::vector<int> perm = {0, 1, 2};
  std::stable_sort(perm.begin(), perm.end(),
                   [&](int a, int b) { return instance.budgets[a] > instance.budgets[b]; });
  auto relabel_mask = [&](TypeMask original) {
    TypeMask r = 0;
    for (int p = 0; p < 3; ++p)
      if (contains(original, perm[p])) r |= TypeMask(1) << p;
    return r;
  };

  const TypeMask kAll = 0b111;
  std::map<TypeMask, long> cap;  // supplies in relabeled coordinates
  for (const auto& [r, c] : instance.supply) cap[relabel_mask(r)] += c;
  auto cap_of = [&](TypeMask r) { return cap.count(r) ? cap[r] : 0; };
  auto pair_mask = [](int i, int j) { return (TypeMask(1) << i) | (TypeMask(1) << j); };

  std::vector<Rat> B(3);
  for (int p = 0; p < 3; ++p) B[p] = instance.budgets[perm[p]];
  std::map<TypeMask, long> x;
  long size = 0;

  auto audit = [&]() {
    Rat left = B[0] + B[1] + B[2];
    if (left + size != instance.k || B[0] < 0 || B[1] < 0 || B[2] < 0)
      throw invariant_error("budget accounting broke: spent " + std::to_string(size) +
                            " with residual " + rat_str(left));
  };

  // Unanimous candidates, costs split as equally as possible.
  while (size < instance.k && cap_of(kAll) - x[kAll] > 0) {
    ++x[kAll];
    ++size;
    Rat p3 = std::min(B[2], Rat(1, 3));
    Rat p2 = std::min(B[1], Rat((Rat(1) - p3) / 2));
    Rat p1 = Rat(1) - p2 - p3;
    B[0] -= p1;
    B[1] -= p2;
    B[2] -= p3;
    audit();
  }

  // Pair candidates by maximal minimum remaining budget; ties go to the
  // pair type with the most remaining supply, then to the lowest pair.
  while (true) {
    int bi = -1, bj = -1;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        long left = cap_of(pair_mask(i, j)) - x[pair_mask(i, j)];
        if (B[i] + B[j] < 1 || left <= 0) continue;
        long best_left = bi < 0 ? 0 : cap_of(pair_mask(bi, bj)) - x[pair_mask(bi, bj)];
        if (bi < 0 ||
            std::min(B[i], B[j]) > std::min(B[bi], B[bj]) ||
            (std::min(B[i], B[j]) == std::min(B[bi], B[bj]) && left > best_left)) {
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) break;
    int hi = B[bi] >= B[bj] ? bi : bj;
    int lo = hi == bi ? bj : bi;
    ++x[pair_mask(bi, bj)];
    ++size;
    Rat p_lo = std::min(B[lo], Rat(1, 2));
    B[hi] -= Rat(1) - p_lo;
    B[lo] -= p_lo;
    audit();
  }

  // Singleton purchases from leftover whole units.
  for (int i = 0; i < 3; ++i) {
    TypeMask r = TypeMask(1) << i;
    long buy = std::min(to_long(floor_rat(B[i])), cap_of(r));
    x[r] += buy;
    size += buy;
    B[i] -= buy;
    audit();
  }

  // Top up to size k, larger approval sets first.
  while (size < instance.k) {
    bool added = false;
    for (int i = 0; i < 3 && !added; ++i)
      for (int j = i + 1; j < 3 && !added; ++j) {
        TypeMask r = pair_mask(i, j);
        if (cap_of(r) - x[r] > 0) {
          ++x[r];
          ++size;
          added = true;
        }
      }
    if (!added) break;
  }
  while (size < instance.k) {
    bool added = false;
    for (int i = 0; i < 3 && !added; ++i) {
      TypeMask r = TypeMask(1) << i;
      if (cap_of(r) - x[r] > 0) {
        ++x[r];
        ++size;
        added = true;
      }
    }
    if (!added) throw invariant_error("ran out of candidates before reaching size k");
  }

  // Map back to the original voter labels.
  auto unlabel_mask = [&](TypeMask relabeled) {
    TypeMask r = 0;
    for (int p = 0; p < 3; ++p)
      if (contains(relabeled, p)) r |= TypeMask(1) << perm[p];
    return r;
  };
  Committee out;
  for (const auto& [r, v] : x)
    if (v > 0) out.amounts[unlabel_mask(r)] = v;
  out.integral = true;
  return out;
}

}  // namespace corelect
