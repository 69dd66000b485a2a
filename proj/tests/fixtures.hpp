#pragma once

// Shared instances used across the unit and acceptance suites.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "corelect/instance.hpp"

namespace fixtures {

using namespace corelect;

inline TypeMask mask_of(std::initializer_list<int> voters_1based) {
  TypeMask m = 0;
  for (int v : voters_1based) m |= TypeMask(1) << (v - 1);
  return m;
}

inline Instance make_instance(int n, long k, std::vector<std::pair<TypeMask, long>> supply,
                              std::vector<Rat> budgets = {}) {
  Instance inst;
  inst.n = n;
  inst.k = k;
  for (auto& [r, c] : supply) inst.supply[r] += c;
  if (budgets.empty()) {
    Rat share(k, n);
    share.canonicalize();
    inst.budgets.assign(n, share);
  } else {
    inst.budgets = std::move(budgets);
  }
  inst.validate();
  return inst;
}

// Three voters, twenty candidates, k = 18; the committee maximizing the
// harmonic score is blocked by the first two voters.
inline ApprovalProfile pav_blocked_profile() {
  ApprovalProfile p;
  p.k = 18;
  for (int i = 1; i <= 20; ++i) p.candidates.push_back("c" + std::to_string(i));
  std::set<std::string> v1, v2, v3;
  for (int i = 1; i <= 11; ++i) v1.insert("c" + std::to_string(i));
  for (int i = 1; i <= 10; ++i) v2.insert("c" + std::to_string(i));
  v2.insert("c12");
  for (int i = 13; i <= 20; ++i) v3.insert("c" + std::to_string(i));
  p.approvals = {v1, v2, v3};
  return p;
}

inline Instance pav_blocked_instance() {
  return make_instance(3, 18,
                       {{mask_of({1, 2}), 10}, {mask_of({1}), 1}, {mask_of({2}), 1}, {mask_of({3}), 8}});
}

// Two disjoint triangles on six voters: (1,...,1) is reachable fractionally
// with halves but not integrally with k = 3.
inline Instance two_triangles() {
  return make_instance(6, 3,
                       {{mask_of({1, 2}), 1},
                        {mask_of({1, 3}), 1},
                        {mask_of({2, 3}), 1},
                        {mask_of({4, 5}), 1},
                        {mask_of({4, 6}), 1},
                        {mask_of({5, 6}), 1}});
}

// Four triple-approved candidates on six voters, k = 2; any two of them
// share a voter.
inline Instance four_candidates() {
  return make_instance(6, 2,
                       {{mask_of({1, 2, 6}), 1},
                        {mask_of({4, 5, 6}), 1},
                        {mask_of({2, 3, 4}), 1},
                        {mask_of({1, 3, 5}), 1}});
}

// Three voters, pairwise candidate types, one of each.
inline Instance pair_triangle(long k) {
  return make_instance(3, k,
                       {{mask_of({1, 2}), 1}, {mask_of({1, 3}), 1}, {mask_of({2, 3}), 1}});
}

// n = 3, k = 9 profile on which the equal-shares rule can pick a dominated
// committee: 6 of {1,2}, 2 of {1,3}, 2 of {2,3}, 3 of {3}.
inline Instance shares_dominated_n3() {
  return make_instance(3, 9,
                       {{mask_of({1, 2}), 6}, {mask_of({1, 3}), 2}, {mask_of({2, 3}), 2}, {mask_of({3}), 3}});
}

// n = 9, k = 27 profile on which the equal-shares rule is blocked by the
// seven voters outside {5,6} regardless of tie-breaking.
inline ApprovalProfile shares_blocked_profile() {
  ApprovalProfile p;
  p.k = 27;
  auto add_group = [&p](const std::string& stem, int count, std::initializer_list<int> approvers) {
    for (int j = 1; j <= count; ++j) p.candidates.push_back(stem + std::to_string(j));
    (void)approvers;
  };
  add_group("a", 18, {});
  add_group("b", 3, {});
  add_group("c", 3, {});
  add_group("d", 3, {});
  add_group("e", 7, {});
  add_group("f", 7, {});
  add_group("g", 7, {});
  auto approves = [](int voter, const std::string& name) {
    char stem = name[0];
    switch (stem) {
      case 'a': return voter <= 6;
      case 'b': return voter == 7 || voter == 8;
      case 'c': return voter == 7 || voter == 9;
      case 'd': return voter == 8 || voter == 9;
      case 'e': return voter <= 4 || voter == 7;
      case 'f': return voter <= 4 || voter == 8;
      case 'g': return voter <= 4 || voter == 9;
    }
    return false;
  };
  for (int v = 1; v <= 9; ++v) {
    std::set<std::string> a;
    for (const auto& name : p.candidates)
      if (approves(v, name)) a.insert(name);
    p.approvals.push_back(std::move(a));
  }
  return p;
}

inline Instance shares_blocked_instance() {
  return make_instance(9, 27,
                       {{mask_of({1, 2, 3, 4, 5, 6}), 18},
                        {mask_of({7, 8}), 3},
                        {mask_of({7, 9}), 3},
                        {mask_of({8, 9}), 3},
                        {mask_of({1, 2, 3, 4, 7}), 7},
                        {mask_of({1, 2, 3, 4, 8}), 7},
                        {mask_of({1, 2, 3, 4, 9}), 7}});
}

// Deterministic random instances for the property corpora.
struct InstanceGen {
  std::mt19937 rng;
  explicit InstanceGen(unsigned seed) : rng(seed) {}

  Instance next(int max_n = 5, long max_k = 5, long max_supply = 2, int max_active = 8) {
    std::uniform_int_distribution<int> nd(1, max_n);
    int n = nd(rng);
    std::uniform_int_distribution<long> kd(0, max_k);
    long k = kd(rng);
    int total_types = (1 << n) - 1;
    std::uniform_int_distribution<int> td(1, std::min(max_active, total_types));
    int active = td(rng);
    Instance inst;
    inst.n = n;
    inst.k = k;
    std::uniform_int_distribution<TypeMask> rd(1, (TypeMask(1) << n) - 1);
    std::uniform_int_distribution<long> sd(1, max_supply);
    for (int t = 0; t < active; ++t) inst.supply[rd(rng)] = sd(rng);
    Rat share(k, n);
    share.canonicalize();
    inst.budgets.assign(n, share);
    inst.validate();
    return inst;
  }

  // Replaces the equal budgets by random non-negative rationals summing to k.
  void randomize_budgets(Instance& inst) {
    std::uniform_int_distribution<int> wd(0, 6);
    std::vector<int> w(inst.n);
    int total = 0;
    for (int& x : w) total += (x = wd(rng));
    if (total == 0) {
      w[0] = 1;
      total = 1;
    }
    for (int i = 0; i < inst.n; ++i) {
      Rat b(inst.k * w[i], total);
      b.canonicalize();
      inst.budgets[i] = b;
    }
    inst.validate();
  }

  std::vector<long> random_utilities(const Instance& inst) {
    std::vector<long> u(inst.n);
    for (int i = 0; i < inst.n; ++i) {
      long cap = std::min<long>(inst.k, inst.approved_supply(i));
      std::uniform_int_distribution<long> ud(0, cap);
      u[i] = ud(rng);
    }
    return u;
  }
};

}  // namespace fixtures
