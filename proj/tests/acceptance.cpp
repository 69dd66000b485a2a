// End-to-end checks over the full library; prints one PASS/FAIL line per
// criterion and exits non-zero if any fail.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <vector>

#include "corelect/analysis.hpp"
#include "corelect/errors.hpp"
#include "corelect/fractional_core.hpp"
#include "corelect/integralization.hpp"
#include "corelect/lp.hpp"
#include "corelect/solver.hpp"
#include "fixtures.hpp"

#ifndef TEST_DATA_DIR
#define TEST_DATA_DIR "tests/data"
#endif

using namespace corelect;
using fixtures::mask_of;

namespace {

int failures = 0;

void criterion(int number, const char* label, const std::function<bool()>& body) {
  bool ok = false;
  std::string note;
  auto start = std::chrono::steady_clock::now();
  try {
    ok = body();
  } catch (const std::exception& e) {
    note = std::string(" (") + e.what() + ")";
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!ok) ++failures;
  std::printf("%2d %-34s %s  [%.1fs]%s\n", number, label, ok ? "PASS" : "FAIL", secs,
              note.c_str());
  std::fflush(stdout);
}

bool harmonic_committee_blocked() {
  Instance inst = fixtures::pav_blocked_instance();
  Committee w = pav(inst);
  auto u = utility(inst, w);
  if (u.values != std::vector<Rat>{Rat(10), Rat(10), Rat(8)}) return false;
  auto cert = verify_core(inst, w);
  if (!cert || cert->coalition.mask != mask_of({1, 2})) return false;
  if (cert->deviation.size() != Rat(12)) return false;
  for (const Rat& g : cert->utility_gains)
    if (g <= 0) return false;
  auto report = solve_core_pareto(inst, {0, 1, 2});
  return !verify_core(inst, report.committee) && !verify_pareto(inst, report.committee);
}

bool determinant_lcm_table() {
  std::vector<long> expect = {1, 1, 2, 6, 60};
  for (int n = 1; n <= 5; ++n)
    if (compute_L(n) != expect[n - 1]) return false;
  return true;
}

bool rounding_gap_witnesses() {
  auto ones = std::vector<Rat>(6, Rat(1));
  auto r1 = check_integralizability(fixtures::two_triangles());
  if (r1.integralizable || r1.counterexample->first.values != ones) return false;
  auto r2 = check_integralizability(fixtures::four_candidates());
  if (r2.integralizable || r2.counterexample->first.values != ones) return false;

  auto pairs = search_nonintegralizable(6, 3, {2}, 1, 4);
  bool found_pairs = false;
  for (const auto& [inst, u] : pairs)
    if (inst.k == 3 && inst.supply.size() == 6 && u.values == ones) found_pairs = true;
  auto triples = search_nonintegralizable(6, 2, {3}, 1, 4);
  bool found_triples = false;
  for (const auto& [inst, u] : triples)
    if (inst.k == 2 && inst.supply.size() == 4 && u.values == ones) found_triples = true;
  return found_pairs && found_triples;
}

bool fractional_implies_integral() {
  fixtures::InstanceGen gen(11);
  for (int trial = 0; trial < 500; ++trial) {
    Instance inst = gen.next(5, 5, 2, 8);
    for (int probe = 0; probe < 5; ++probe) {
      auto u = UtilityVector::of_longs(gen.random_utilities(inst));
      if (fractional_feasible(inst, u, Rat(inst.k)) && !oracle_integral_feasible(inst, u))
        return false;
    }
  }
  return true;
}

Committee random_fractional(fixtures::InstanceGen& gen, const Instance& inst) {
  Committee x;
  x.integral = false;
  Rat left(inst.k);
  std::uniform_int_distribution<long> num(0, 16);
  for (TypeMask r : inst.active_types()) {
    Rat v(num(gen.rng) * inst.supply_of(r), 16);
    v.canonicalize();
    v = std::min(v, left);
    if (v > 0) x.amounts[r] = v;
    left -= v;
  }
  return x;
}

bool rounding_contract() {
  fixtures::InstanceGen gen(13);
  for (int trial = 0; trial < 300; ++trial) {
    Instance inst = gen.next(5, 5, 2, 8);
    Committee x = random_fractional(gen, inst);
    Committee out = round_committee(inst, x);
    Rat size(0);
    for (TypeMask r : inst.active_types()) {
      Rat v = out.amount_of(r);
      if (!is_integer(v) || v < floor_rat(x.amount_of(r)) || v > ceil_rat(x.amount_of(r)))
        return false;
      size += v;
    }
    if (size > inst.k) return false;
    auto ux = utility(inst, x);
    auto uo = utility(inst, out);
    for (int i = 0; i < inst.n; ++i)
      if (uo.values[i] < floor_rat(ux.values[i])) return false;
  }
  return true;
}

bool tau_denominators() {
  fixtures::InstanceGen gen(17);
  int finite = 0;
  while (finite < 300) {
    Instance inst = gen.next(5, 5, 2, 8);
    auto u = UtilityVector::of_longs(gen.random_utilities(inst));
    auto t = tau(inst, u);
    if (!t) continue;
    ++finite;
    if (!is_integer(t->value * compute_L(inst.n))) return false;
  }
  return true;
}

bool end_to_end_core() {
  fixtures::InstanceGen gen(19);
  for (int trial = 0; trial < 200; ++trial) {
    Instance inst = gen.next(5, 5, 2, 8);
    if (trial % 2) gen.randomize_budgets(inst);
    std::vector<int> order(inst.n);
    std::iota(order.begin(), order.end(), 0);
    auto report = solve_core_pareto(inst, order);
    if (verify_core(inst, report.committee) || verify_pareto(inst, report.committee))
      return false;
  }
  return true;
}

bool three_voter_solver() {
  fixtures::InstanceGen gen(23);
  int done = 0;
  while (done < 200) {
    Instance inst = gen.next(3, 5, 2, 7);
    if (done % 2) gen.randomize_budgets(inst);
    long total = 0;
    for (const auto& [r, c] : inst.supply) total += c;
    if (total < inst.k) continue;
    if (inst.n != 3) continue;
    ++done;
    Committee x = solve_core_n3(inst);  // audits its accounting internally
    if (x.size() != Rat(inst.k)) return false;
    if (verify_core(inst, x) || verify_pareto(inst, x)) return false;
  }
  return true;
}

bool equal_shares_counterexamples() {
  Instance nine = fixtures::shares_blocked_instance();
  Committee w = mes(nine);
  if (w.amount_of(mask_of({1, 2, 3, 4, 5, 6})) != Rat(18) ||
      w.amount_of(mask_of({7, 8})) != Rat(3) || w.amount_of(mask_of({7, 9})) != Rat(3) ||
      w.amount_of(mask_of({8, 9})) != Rat(3))
    return false;
  auto u = utility(nine, w);
  for (int i = 0; i < 6; ++i)
    if (u.values[i] != Rat(18)) return false;
  for (int i = 6; i < 9; ++i)
    if (u.values[i] != Rat(6)) return false;
  auto cert = verify_core(nine, w);
  if (!cert || cert->coalition.mask != mask_of({1, 2, 3, 4, 7, 8, 9})) return false;
  if (cert->deviation.size() != Rat(21)) return false;

  Instance three = fixtures::shares_dominated_n3();
  Committee m = mes(three, {mask_of({1, 2}), mask_of({3}), mask_of({1, 3}), mask_of({2, 3})});
  auto um = utility(three, m);
  if (um.values != std::vector<Rat>{Rat(6), Rat(6), Rat(3)}) return false;
  auto us = utility(three, solve_core_n3(three));
  for (int i = 0; i < 3; ++i)
    if (us.values[i] <= um.values[i]) return false;
  return true;
}

bool general_model_gaps() {
  auto pair_costs = [] {
    GeneralInstance g;
    g.n = 3;
    g.fractional_budget = g.integral_budget = 3;
    g.candidates = {{Rat(2), {Rat(1), Rat(1), Rat(0)}},
                    {Rat(2), {Rat(1), Rat(0), Rat(1)}},
                    {Rat(2), {Rat(0), Rat(1), Rat(1)}}};
    return g;
  }();
  auto valuations = [] {
    GeneralInstance g;
    g.n = 3;
    g.fractional_budget = g.integral_budget = 1;
    g.candidates = {{Rat(1), {Rat(2), Rat(1), Rat(0)}},
                    {Rat(1), {Rat(0), Rat(2), Rat(1)}},
                    {Rat(1), {Rat(1), Rat(0), Rat(2)}}};
    return g;
  }();
  auto droop = [] {
    GeneralInstance g;
    g.n = 3;
    g.fractional_budget = Rat(2) - Rat(1, 100);
    g.integral_budget = 1;
    g.candidates = {{Rat(1), {Rat(1), Rat(1), Rat(0)}},
                    {Rat(1), {Rat(1), Rat(0), Rat(1)}},
                    {Rat(1), {Rat(0), Rat(1), Rat(1)}}};
    return g;
  }();
  auto ones = UtilityVector::of_longs({1, 1, 1});
  for (const auto& g : {pair_costs, valuations, droop}) {
    auto report = feasibility_gap(g, ones);
    if (!report.fractional || report.integral) return false;
  }
  return true;
}

bool monoid_emission() {
  std::string text = emit_normaliz(5);
  std::ifstream in(std::string(TEST_DATA_DIR) + "/monoid_n5.in");
  std::stringstream want;
  want << in.rdbuf();
  if (text != want.str()) return false;
  auto gens = monoid_generators(5);
  if (gens.size() != 68) return false;
  for (const auto& g : gens)
    if (g.coords.size() != 37) return false;
  return true;
}

bool interval_instances() {
  Instance good = fixtures::make_instance(
      3, 2, {{mask_of({1}), 1}, {mask_of({1, 2, 3}), 1}, {mask_of({1, 3}), 1}, {mask_of({3}), 1}});
  if (!is_candidate_interval(good)) return false;
  if (is_candidate_interval(fixtures::two_triangles())) return false;

  // Types sit at positions on a line; each voter approves an interval of
  // positions, so the instance is candidate-interval by construction.
  std::mt19937 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_int_distribution<int> nd(1, 6), td(1, 6);
    int n = nd(rng);
    int slots = td(rng);
    Instance inst;
    inst.n = n;
    std::uniform_int_distribution<int> sd(1, 2), pd(0, slots - 1);
    std::vector<TypeMask> at(slots, 0);
    for (int i = 0; i < n; ++i) {
      int a = pd(rng), b = pd(rng);
      if (a > b) std::swap(a, b);
      for (int p = a; p <= b; ++p) at[p] |= TypeMask(1) << i;
    }
    for (TypeMask r : at)
      if (r) inst.supply[r] += sd(rng);
    std::uniform_int_distribution<long> kd(0, 4);
    inst.k = kd(rng);
    inst.budgets.assign(n, Rat(inst.k, n));
    for (auto& b : inst.budgets) b.canonicalize();
    inst.validate();
    if (!is_candidate_interval(inst)) return false;
    if (!check_integralizability(inst).integralizable) return false;
  }
  return true;
}

}  // namespace

int main() {
  criterion(1, "blocked-harmonic-committee", harmonic_committee_blocked);
  criterion(2, "determinant-lcm-table", determinant_lcm_table);
  criterion(3, "rounding-gap-witnesses", rounding_gap_witnesses);
  criterion(4, "fractional-implies-integral", fractional_implies_integral);
  criterion(5, "rounding-contract", rounding_contract);
  criterion(6, "tau-denominators", tau_denominators);
  criterion(7, "end-to-end-core", end_to_end_core);
  criterion(8, "three-voter-solver", three_voter_solver);
  criterion(9, "equal-shares-counterexamples", equal_shares_counterexamples);
  criterion(10, "general-model-gaps", general_model_gaps);
  criterion(11, "monoid-emission", monoid_emission);
  criterion(12, "interval-instances", interval_instances);
  return failures == 0 ? 0 : 1;
}
