#include "doctest.h"

#include "corelect/errors.hpp"
#include "corelect/fractional_core.hpp"
#include "fixtures.hpp"

using namespace corelect;
using fixtures::mask_of;

TEST_CASE("selecting the whole supply is stable when it fits") {
  Instance inst = fixtures::make_instance(2, 5, {{mask_of({1, 2}), 2}, {mask_of({1}), 1}});
  auto point = approx_fractional_core(inst, Rat(1, 4));
  CHECK(point.verified);
  CHECK(point.x.amount_of(mask_of({1, 2})) == Rat(2));
  CHECK(point.x.amount_of(mask_of({1})) == Rat(1));
}

TEST_CASE("single voter gets full utility") {
  Instance inst = fixtures::make_instance(1, 3, {{mask_of({1}), 5}});
  auto point = approx_fractional_core(inst, Rat(1, 2));
  CHECK(point.verified);
  auto u = utility(inst, point.x);
  CHECK(u.values[0] >= Rat(3));
}

TEST_CASE("two-triangles point floors to all-ones") {
  Instance inst = fixtures::two_triangles();
  auto point = approx_fractional_core(inst, Rat(1, 61));
  REQUIRE(point.verified);
  auto u = utility(inst, point.x);
  for (int i = 0; i < inst.n; ++i) CHECK(u.values[i] >= Rat(1));
  CHECK(point.x.size() <= Rat(3) + Rat(1, 61));
}

TEST_CASE("halves on the two triangles pass verification") {
  Instance inst = fixtures::two_triangles();
  Committee halves;
  halves.integral = false;
  for (TypeMask r : inst.active_types()) halves.amounts[r] = Rat(1, 2);
  CHECK_FALSE(verify_fractional_core(inst, halves).has_value());
}

TEST_CASE("the harmonic-score committee is fractionally blocked") {
  Instance inst = fixtures::pav_blocked_instance();
  Committee x;
  x.amounts[mask_of({1, 2})] = 10;
  x.amounts[mask_of({3})] = 8;
  auto blocker = verify_fractional_core(inst, x);
  REQUIRE(blocker.has_value());
  CHECK(blocker->first.mask == mask_of({1, 2}));
  CHECK(blocker->second.size() <= Rat(12));
  auto uy = utility(inst, blocker->second);
  CHECK(uy.values[0] > Rat(10));
  CHECK(uy.values[1] > Rat(10));
}

TEST_CASE("empty committee is unblocked when k is zero") {
  Instance inst = fixtures::make_instance(2, 0, {{mask_of({1, 2}), 3}});
  Committee empty;
  empty.integral = false;
  CHECK_FALSE(verify_fractional_core(inst, empty).has_value());
}

TEST_CASE("rejects non-positive epsilon") {
  Instance inst = fixtures::pair_triangle(1);
  CHECK_THROWS_AS(approx_fractional_core(inst, Rat(0)), precondition_error);
  CHECK_THROWS_AS(approx_fractional_core(inst, Rat(-1)), precondition_error);
}

TEST_CASE("approx output satisfies the exact contract on random instances") {
  fixtures::InstanceGen gen(41);
  for (int trial = 0; trial < 60; ++trial) {
    Instance inst = gen.next(5, 6, 3, 8);
    if (trial % 2) gen.randomize_budgets(inst);
    Rat eps(1, 61);
    auto point = approx_fractional_core(inst, eps);
    CHECK(point.verified);
    CHECK(point.epsilon_used == eps);
    for (const auto& [r, v] : point.x.amounts) {
      CHECK(v >= Rat(0));
      CHECK(v <= Rat(inst.supply_of(r)));
    }
    CHECK(point.x.size() - Rat(inst.k) <= eps);
  }
}

TEST_CASE("blocking certificates re-validate arithmetically") {
  fixtures::InstanceGen gen(43);
  int found = 0;
  for (int trial = 0; trial < 60; ++trial) {
    Instance inst = gen.next(4, 4, 2, 6);
    // A deliberately lopsided committee: dump everything into the first type.
    auto types = inst.active_types();
    if (types.empty()) continue;
    Committee x;
    x.integral = false;
    x.amounts[types[0]] = std::min(Rat(inst.supply_of(types[0])), Rat(inst.k));
    auto blocker = verify_fractional_core(inst, x);
    if (!blocker) continue;
    ++found;
    auto ux = utility(inst, x);
    auto uy = utility(inst, blocker->second);
    for (int i : blocker->first.voters()) CHECK(uy.values[i] > ux.values[i]);
    CHECK(blocker->second.size() <= coalition_budget(inst, blocker->first));
    for (const auto& [r, v] : blocker->second.amounts) CHECK(v <= Rat(inst.supply_of(r)));
  }
  CHECK(found > 5);
}
