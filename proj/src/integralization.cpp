#include "corelect/integralization.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "corelect/errors.hpp"
#include "corelect/lp.hpp"

namespace corelect {

namespace {

// Fractional relaxation of the residual search: can the remaining types
// cover the remaining demands within the remaining budget?
bool relaxation_feasible(const std::vector<TypeMask>& types, std::size_t from,
                         const std::vector<long>& caps, const std::vector<long>& demands,
                         long budget) {
  LinearProgram lp;
  for (std::size_t j = from; j < types.size(); ++j) lp.add_var(Rat(0), Rat(caps[j]));
  std::vector<Rat> size_row(lp.num_vars, Rat(1));
  lp.add_row(std::move(size_row), Rel::Le, Rat(budget));
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (demands[i] <= 0) continue;
    std::vector<Rat> row(lp.num_vars, Rat(0));
    for (std::size_t j = from; j < types.size(); ++j)
      if (contains(types[j], (int)i)) row[j - from] = 1;
    lp.add_row(std::move(row), Rel::Ge, Rat(demands[i]));
  }
  return solve_lp(lp).status == LpStatus::Optimal;
}

}  // namespace

std::optional<Committee> oracle_integral_feasible(const Instance& instance,
                                                  const UtilityVector& u) {
  if (!u.integral) throw precondition_error("oracle requires an integral utility vector");
  if ((int)u.values.size() != instance.n)
    throw precondition_error("utility vector length does not match voter count");

  std::vector<long> demands(instance.n);
  for (int i = 0; i < instance.n; ++i) {
    if (!is_integer(u.values[i])) throw precondition_error("utility vector has a fractional entry");
    demands[i] = std::max(0L, to_long(Int(u.values[i].get_num())));
  }

  // High-coverage types first shrink the tree.
  auto types = instance.active_types();
  std::stable_sort(types.begin(), types.end(),
                   [](TypeMask a, TypeMask b) { return popcount(a) > popcount(b); });
  std::vector<long> caps(types.size());
  for (std::size_t j = 0; j < types.size(); ++j) caps[j] = instance.supply_of(types[j]);

  std::vector<long> chosen(types.size(), 0);
  std::optional<Committee> found;

  std::function<bool(std::size_t, long)> dfs = [&](std::size_t j, long budget) {
    if (std::all_of(demands.begin(), demands.end(), [](long d) { return d <= 0; })) {
      Committee w;
      for (std::size_t t = 0; t < types.size(); ++t)
        if (chosen[t] > 0) w.amounts[types[t]] = chosen[t];
      found = std::move(w);
      return true;
    }
    if (j == types.size()) return false;
    if (!relaxation_feasible(types, j, caps, demands, budget)) return false;

    long need = 0;
    for (int i : members(types[j])) need = std::max(need, demands[i]);
    long high = std::min({caps[j], budget, need});
    for (long v = high; v >= 0; --v) {
      chosen[j] = v;
      for (int i : members(types[j])) demands[i] -= v;
      bool ok = dfs(j + 1, budget - v);
      for (int i : members(types[j])) demands[i] += v;
      chosen[j] = 0;
      if (ok) return true;
    }
    return false;
  };

  dfs(0, instance.k);
  return found;
}

Committee round_committee(const Instance& instance, const Committee& x) {
  if (instance.n > 5) throw unsupported_error("rounding guarantee requires at most 5 voters");
  Rat size(0);
  for (const auto& [r, v] : x.amounts) {
    if (v < 0 || v > instance.supply_of(r))
      throw precondition_error("committee violates supply bounds for type " + type_str(r));
    size += v;
  }
  if (size > instance.k) throw precondition_error("committee exceeds the budget k");

  auto target = utility(instance, x);
  std::vector<long> floors(instance.n);
  for (int i = 0; i < instance.n; ++i) floors[i] = to_long(floor_rat(target.values[i]));

  Committee out;
  std::vector<TypeMask> pending;  // fractional types, canonical order
  for (TypeMask r : instance.active_types()) {
    Rat v = x.amount_of(r);
    Int fl = floor_rat(v);
    if (fl > 0) out.amounts[r] = Rat(fl);
    if (v != Rat(fl)) pending.push_back(r);
  }

  auto deficit = [&]() {
    auto cur = utility(instance, out);
    for (int i = 0; i < instance.n; ++i)
      if (cur.values[i] < floors[i]) return true;
    return false;
  };

  std::size_t next = 0;
  while (deficit()) {
    if (next >= pending.size())
      throw invariant_error("rounding ran out of fractional types before meeting the floors");
    TypeMask star = pending[next];

    auto cur = utility(instance, out);
    LinearProgram lp;
    for (std::size_t j = next; j < pending.size(); ++j)
      lp.add_var(pending[j] == star ? Rat(1) : Rat(0), Rat(1));
    for (int i = 0; i < instance.n; ++i) {
      std::vector<Rat> row(lp.num_vars, Rat(0));
      for (std::size_t j = next; j < pending.size(); ++j)
        if (contains(pending[j], i)) row[j - next] = 1;
      lp.add_row(std::move(row), Rel::Ge, Rat(floors[i]) - cur.values[i]);
    }
    std::vector<Rat> size_row(lp.num_vars, Rat(1));
    lp.add_row(std::move(size_row), Rel::Le, Rat(instance.k) - out.size());
    if (solve_lp(lp).status == LpStatus::Optimal) out.amounts[star] += 1;
    ++next;
  }

  out.integral = true;
  out.normalize();
  return out;
}

std::pair<UtilityVector, Committee> round_utilities(const Instance& instance,
                                                    const Committee& x) {
  Committee witness = round_committee(instance, x);
  auto target = utility(instance, x);
  UtilityVector floors;
  floors.integral = true;
  for (const Rat& v : target.values) floors.values.emplace_back(floor_rat(v));
  return {std::move(floors), std::move(witness)};
}

IntegralizabilityReport check_integralizability(const Instance& instance, long long cap) {
  if (instance.n > 8) throw unsupported_error("integralizability check supports at most 8 voters");

  std::vector<long> bound(instance.n);
  __int128 count = 1;
  for (int i = 0; i < instance.n; ++i) {
    bound[i] = std::min<long>(instance.k, instance.approved_supply(i));
    count *= (bound[i] + 1);
    if (count > cap)
      throw resource_error("utility enumeration needs more than " + std::to_string(cap) +
                           " vectors");
  }

  auto dominated_by = [&](const std::vector<long>& u, const std::vector<long>& v) {
    for (int i = 0; i < instance.n; ++i)
      if (u[i] > v[i]) return false;
    return true;
  };

  // The integrally feasible utility vectors are exactly those dominated by
  // the utility vector of some integral committee; enumerate all committees
  // once and keep the maximal utility vectors.
  std::vector<std::vector<long>> frontier;
  auto types = instance.active_types();
  std::vector<long> uw(instance.n, 0);
  long long leaves = 0;
  std::function<void(std::size_t, long)> enumerate = [&](std::size_t idx, long seats) {
    if (idx == types.size() || seats == 0) {
      if (++leaves > cap)
        throw resource_error("committee enumeration needs more than " + std::to_string(cap) +
                             " nodes");
      for (const auto& w : frontier)
        if (dominated_by(uw, w)) return;
      std::erase_if(frontier, [&](const std::vector<long>& w) { return dominated_by(w, uw); });
      frontier.push_back(uw);
      return;
    }
    long most = std::min<long>(instance.supply_of(types[idx]), seats);
    for (int i : members(types[idx])) uw[i] += most;
    for (long v = most; v >= 0; --v) {
      enumerate(idx + 1, seats - v);
      if (v > 0)
        for (int i : members(types[idx])) --uw[i];
    }
  };
  enumerate(0, instance.k);

  // Fractional infeasibility is monotone upward, so failed vectors settle
  // every dominating one without another LP.
  std::vector<std::vector<long>> infeasible;
  std::vector<long> u(instance.n, 0);
  while (true) {
    bool settled = false;
    for (const auto& w : frontier)
      if ((settled = dominated_by(u, w))) break;
    if (!settled)
      for (const auto& w : infeasible)
        if ((settled = dominated_by(w, u))) break;
    if (!settled) {
      UtilityVector uv = UtilityVector::of_longs(u);
      auto frac = fractional_feasible(instance, uv, Rat(instance.k));
      if (frac) {
        IntegralizabilityReport report;
        report.integralizable = false;
        report.counterexample = {std::move(uv), std::move(*frac)};
        return report;
      }
      if (infeasible.size() < 512) infeasible.push_back(u);
    }
    int pos = instance.n - 1;
    while (pos >= 0 && u[pos] == bound[pos]) u[pos--] = 0;
    if (pos < 0) break;
    ++u[pos];
  }
  return {};
}

std::optional<std::vector<TypeMask>> is_candidate_interval(const Instance& instance) {
  auto types = instance.active_types();
  if (types.size() > 10) throw unsupported_error("interval search supports at most 10 types");
  if (types.empty()) return std::vector<TypeMask>{};

  enum State { kUnseen, kOpen, kClosed };
  std::vector<State> state(instance.n, kUnseen);
  std::vector<bool> used(types.size(), false);
  std::vector<TypeMask> order;

  std::function<bool()> dfs = [&]() {
    if (order.size() == types.size()) return true;
    for (std::size_t j = 0; j < types.size(); ++j) {
      if (used[j]) continue;
      TypeMask r = types[j];
      bool ok = true;
      for (int i = 0; i < instance.n && ok; ++i)
        if (contains(r, i) && state[i] == kClosed) ok = false;
      if (!ok) continue;
      auto saved = state;
      for (int i = 0; i < instance.n; ++i) {
        if (contains(r, i))
          state[i] = kOpen;
        else if (state[i] == kOpen)
          state[i] = kClosed;
      }
      used[j] = true;
      order.push_back(r);
      if (dfs()) return true;
      order.pop_back();
      used[j] = false;
      state = saved;
    }
    return false;
  };

  if (dfs()) return order;
  return std::nullopt;
}

std::vector<MonoidGenerator> monoid_generators(int n) {
  if (n < 1 || n > 6) throw precondition_error("generator listing supports 1 <= n <= 6");
  auto types = all_types(n);
  int num_types = (int)types.size();
  int dim = num_types + 1 + n;
  auto index_of = [&](TypeMask r) {
    return (int)(std::find(types.begin(), types.end(), r) - types.begin());
  };

  std::vector<MonoidGenerator> gens;
  for (TypeMask r : types) {
    MonoidGenerator g{MonoidGenerator::Kind::X, r, -1, std::vector<long>(dim, 0)};
    g.coords[index_of(r)] = 1;
    g.coords[num_types] = 1;
    for (int i : members(r)) g.coords[num_types + 1 + i] = 1;
    gens.push_back(std::move(g));
  }
  for (TypeMask r : types) {
    MonoidGenerator g{MonoidGenerator::Kind::Z, r, -1, std::vector<long>(dim, 0)};
    g.coords[index_of(r)] = 1;
    gens.push_back(std::move(g));
  }
  {
    MonoidGenerator g{MonoidGenerator::Kind::T, 0, -1, std::vector<long>(dim, 0)};
    g.coords[num_types] = 1;
    gens.push_back(std::move(g));
  }
  for (int i = 0; i < n; ++i) {
    MonoidGenerator g{MonoidGenerator::Kind::S, 0, i, std::vector<long>(dim, 0)};
    g.coords[num_types + 1 + i] = -1;
    gens.push_back(std::move(g));
  }
  return gens;
}

std::string emit_normaliz(int n) {
  auto gens = monoid_generators(n);
  std::ostringstream os;
  os << "amb_space " << gens.front().coords.size() << "\n";
  os << "cone " << gens.size() << "\n";
  for (const auto& g : gens) {
    for (std::size_t j = 0; j < g.coords.size(); ++j) {
      if (j) os << ' ';
      os << g.coords[j];
    }
    os << "\n";
  }
  return os.str();
}

std::optional<MonoidDecomposition> monoid_member(int n, const std::vector<long>& point) {
  auto types = all_types(n);
  int num_types = (int)types.size();
  if ((int)point.size() != num_types + 1 + n)
    throw precondition_error("point has wrong dimension for " + std::to_string(n) + " voters");

  Instance inst;
  inst.n = n;
  inst.k = point[num_types];
  if (inst.k < 0) return std::nullopt;
  for (int j = 0; j < num_types; ++j) {
    if (point[j] < 0) return std::nullopt;
    if (point[j] > 0) inst.supply[types[j]] = point[j];
  }
  Rat share(inst.k, n);
  share.canonicalize();
  inst.budgets.assign(n, share);

  std::vector<long> u(point.end() - n, point.end());
  auto witness = oracle_integral_feasible(inst, UtilityVector::of_longs(u));
  if (!witness) return std::nullopt;

  MonoidDecomposition d;
  long total = 0;
  for (int j = 0; j < num_types; ++j) {
    long xr = to_long(Int(witness->amount_of(types[j]).get_num()));
    if (xr > 0) d.x[types[j]] = xr;
    long zr = point[j] - xr;
    if (zr > 0) d.z[types[j]] = zr;
    total += xr;
  }
  d.t = inst.k - total;
  d.s.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    long got = 0;
    for (const auto& [r, v] : d.x)
      if (contains(r, i)) got += v;
    d.s[i] = got - u[i];
  }
  return d;
}

}  // namespace corelect
