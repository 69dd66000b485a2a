#include "corelect/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "corelect/errors.hpp"
#include "corelect/integralization.hpp"
#include "corelect/lp.hpp"

namespace corelect {

using json = nlohmann::json;

namespace {

void require_in_w(const Instance& instance, const Committee& x) {
  if (!x.integral) throw precondition_error("verifier needs an integral committee");
  Rat size(0);
  for (const auto& [r, v] : x.amounts) {
    if (!is_integer(v) || v < 0 || v > instance.supply_of(r))
      throw precondition_error("committee violates supply bounds for type " + type_str(r));
    size += v;
  }
  if (size > instance.k) throw precondition_error("committee exceeds the budget k");
}

std::vector<long> long_utilities(const Instance& instance, const Committee& x) {
  auto u = utility(instance, x);
  std::vector<long> out(instance.n);
  for (int i = 0; i < instance.n; ++i) out[i] = to_long(u.values[i].get_num());
  return out;
}

}  // namespace

std::optional<BlockingCertificate> verify_core(const Instance& instance, const Committee& x) {
  require_in_w(instance, x);
  auto base = long_utilities(instance, x);

  for (CoalitionMask s = 1; s < (CoalitionMask(1) << instance.n); ++s) {
    long seats = to_long(floor_rat(coalition_budget(instance, {s})));
    if (seats <= 0) continue;
    Instance sub = instance;
    sub.k = seats;

    auto demands = [&](long gain) {
      std::vector<long> d(instance.n, 0);
      for (int i : members(s)) d[i] = base[i] + gain;
      return UtilityVector::of_longs(d);
    };
    if (!oracle_integral_feasible(sub, demands(1))) continue;

    // Largest uniform gain every member can be guaranteed.
    long lo = 1, hi = seats;
    while (lo < hi) {
      long mid = lo + (hi - lo + 1) / 2;
      if (oracle_integral_feasible(sub, demands(mid)))
        lo = mid;
      else
        hi = mid - 1;
    }
    auto deviation = oracle_integral_feasible(sub, demands(lo));

    BlockingCertificate cert;
    cert.coalition = {s};
    cert.deviation = std::move(*deviation);
    auto uy = long_utilities(instance, cert.deviation);
    for (int i : members(s)) cert.utility_gains.emplace_back(uy[i] - base[i]);
    return cert;
  }
  return std::nullopt;
}

std::optional<Committee> verify_pareto(const Instance& instance, const Committee& x) {
  require_in_w(instance, x);
  auto base = long_utilities(instance, x);
  // A dominating committee gives some voter strictly more and nobody less.
  for (int i = 0; i < instance.n; ++i) {
    auto d = base;
    d[i] += 1;
    if (auto y = oracle_integral_feasible(instance, UtilityVector::of_longs(d))) return y;
  }
  return std::nullopt;
}

Committee pav(const Instance& instance, long long cap) {
  auto types = instance.active_types();
  std::vector<Rat> harmonic(instance.k + 1, Rat(0));
  for (long m = 1; m <= instance.k; ++m) harmonic[m] = harmonic[m - 1] + Rat(1, m);

  std::vector<long> counts(types.size(), 0), best_counts;
  std::vector<long> u(instance.n, 0);
  Rat best_score(-1);
  long long nodes = 0;

  std::function<void(std::size_t, long)> dfs = [&](std::size_t j, long seats_left) {
    if (++nodes > cap)
      throw resource_error("committee enumeration needs more than " + std::to_string(cap) +
                           " nodes");
    if (j == types.size()) {
      Rat score(0);
      for (int i = 0; i < instance.n; ++i)
        score += harmonic[std::min<long>(u[i], instance.k)];
      if (score > best_score) {
        best_score = score;
        best_counts = counts;
      }
      return;
    }
    long high = std::min<long>(instance.supply_of(types[j]), seats_left);
    for (long v = high; v >= 0; --v) {
      counts[j] = v;
      for (int i : members(types[j])) u[i] += v;
      dfs(j + 1, seats_left - v);
      for (int i : members(types[j])) u[i] -= v;
      counts[j] = 0;
    }
  };
  dfs(0, instance.k);

  Committee out;
  for (std::size_t j = 0; j < types.size(); ++j)
    if (best_counts[j] > 0) out.amounts[types[j]] = best_counts[j];
  return out;
}

namespace {

// Smallest per-approver payment rho with sum_i min(b_i, rho) = 1, absent
// when the group cannot afford a whole unit.
std::optional<Rat> equal_share_price(std::vector<Rat> budgets) {
  std::sort(budgets.begin(), budgets.end());
  Rat paid(0);
  int m = (int)budgets.size();
  for (int t = 0; t <= m; ++t) {
    if (t == m) break;
    // Members before t pay their full budget; the rest pay rho each.
    Rat rho = (Rat(1) - paid) / Rat(m - t);
    if (rho <= budgets[t]) return std::max(rho, Rat(0));
    paid += budgets[t];
  }
  return std::nullopt;
}

}  // namespace

Committee mes(const Instance& instance) { return mes(instance, {}); }

Committee mes(const Instance& instance, const std::vector<TypeMask>& priority) {
  auto types = instance.active_types();
  auto rank = [&](TypeMask r) {
    auto it = std::find(priority.begin(), priority.end(), r);
    return it == priority.end() ? (long)priority.size() : (long)(it - priority.begin());
  };

  std::vector<Rat> budget = instance.budgets;
  Committee out;
  long selected = 0;
  while (selected < instance.k) {
    TypeMask pick = 0;
    std::optional<Rat> pick_price;
    for (TypeMask r : types) {
      if (out.amount_of(r) >= instance.supply_of(r)) continue;
      std::vector<Rat> share;
      for (int i : members(r)) share.push_back(budget[i]);
      auto price = equal_share_price(std::move(share));
      if (!price) continue;
      bool better = !pick_price || *price < *pick_price;
      if (!better && *price == *pick_price && !priority.empty() &&
          rank(r) < rank(pick))
        better = true;
      if (better) {
        pick = r;
        pick_price = *price;
      }
    }
    if (!pick_price) break;
    out.amounts[pick] += 1;
    ++selected;
    for (int i : members(pick)) budget[i] -= std::min(budget[i], *pick_price);
  }
  out.integral = true;
  out.normalize();
  return out;
}

std::vector<std::pair<Instance, UtilityVector>> search_nonintegralizable(
    int n, long k_max, const std::set<int>& type_sizes, long supply_cap, int jobs,
    long long cap) {
  if (n < 1 || n > 6) throw precondition_error("search supports 1 <= n <= 6");
  if (supply_cap < 0 || k_max < 0) throw precondition_error("bounds must be non-negative");

  std::vector<TypeMask> pool;
  for (TypeMask r : all_types(n))
    if (type_sizes.count(popcount(r))) pool.push_back(r);
  int m = (int)pool.size();

  // Position table per voter permutation: type j maps to perm_pos[p][j].
  std::vector<int> voters(n);
  std::iota(voters.begin(), voters.end(), 0);
  // source[p][j] = index whose supply lands at position j after relabeling
  // voters by permutation p.
  std::vector<std::vector<int>> source;
  std::vector<int> p = voters;
  do {
    std::vector<int> src(m);
    for (int j = 0; j < m; ++j) {
      TypeMask image = 0;
      for (int i : members(pool[j])) image |= TypeMask(1) << p[i];
      int at = (int)(std::find(pool.begin(), pool.end(), image) - pool.begin());
      src[at] = j;
    }
    source.push_back(std::move(src));
  } while (std::next_permutation(p.begin(), p.end()));

  // Collect canonical supply assignments (lexicographic minimum over the
  // voter-permutation orbit).
  std::vector<std::vector<long>> canonical;
  std::vector<long> a(m, 0);
  long long seen = 0;
  while (true) {
    if (++seen > cap)
      throw resource_error("instance enumeration needs more than " + std::to_string(cap) +
                           " assignments (partial results discarded)");
    bool minimal = true;
    for (const auto& src : source) {
      int verdict = 0;  // first non-equal coordinate decides
      for (int j = 0; j < m; ++j) {
        long relabeled = a[src[j]];
        if (relabeled != a[j]) {
          verdict = relabeled < a[j] ? -1 : 1;
          break;
        }
      }
      if (verdict < 0) {
        minimal = false;
        break;
      }
    }
    if (minimal) canonical.push_back(a);
    int j = m - 1;
    while (j >= 0 && a[j] == supply_cap) a[j--] = 0;
    if (j < 0) break;
    ++a[j];
  }

  std::vector<std::vector<std::pair<Instance, UtilityVector>>> found(canonical.size());
  std::atomic<std::size_t> next(0);
  auto worker = [&]() {
    for (std::size_t idx = next.fetch_add(1); idx < canonical.size();
         idx = next.fetch_add(1)) {
      // Committees of size 0 or 1 never have a rounding gap.
      for (long k = 2; k <= k_max; ++k) {
        Instance inst;
        inst.n = n;
        inst.k = k;
        for (int j = 0; j < m; ++j)
          if (canonical[idx][j] > 0) inst.supply[pool[j]] = canonical[idx][j];
        Rat share(k, n);
        share.canonicalize();
        inst.budgets.assign(n, share);
        auto report = check_integralizability(inst);
        if (!report.integralizable)
          found[idx].emplace_back(std::move(inst), std::move(report.counterexample->first));
      }
    }
  };
  int workers = std::max(1, jobs);
  std::vector<std::thread> pool_threads;
  for (int w = 1; w < workers; ++w) pool_threads.emplace_back(worker);
  worker();
  for (auto& t : pool_threads) t.join();

  std::vector<std::pair<Instance, UtilityVector>> out;
  for (auto& chunk : found)
    for (auto& hit : chunk) out.push_back(std::move(hit));
  return out;
}

GapReport feasibility_gap(const GeneralInstance& g, const UtilityVector& u) {
  if ((int)u.values.size() != g.n)
    throw precondition_error("utility vector length does not match voter count");
  int m = (int)g.candidates.size();
  GapReport report;

  {
    LinearProgram lp;
    for (int c = 0; c < m; ++c) lp.add_var(Rat(0), Rat(1));
    std::vector<Rat> costs(m);
    for (int c = 0; c < m; ++c) costs[c] = g.candidates[c].cost;
    lp.add_row(costs, Rel::Le, g.fractional_budget);
    for (int i = 0; i < g.n; ++i) {
      std::vector<Rat> row(m);
      for (int c = 0; c < m; ++c) row[c] = g.candidates[c].values[i];
      lp.add_row(std::move(row), Rel::Ge, u.values[i]);
    }
    auto out = solve_lp(lp);
    if (out.status == LpStatus::Optimal) report.fractional = out.solution;
  }

  {
    std::vector<long> chosen(m, 0);
    std::vector<Rat> need(u.values);
    Rat left = g.integral_budget;
    std::function<bool(int)> dfs = [&](int c) {
      bool met = true;
      for (const Rat& d : need)
        if (d > 0) met = false;
      if (met) {
        report.integral = chosen;
        return true;
      }
      if (c == m) return false;
      // Relaxation over the remaining candidates.
      LinearProgram lp;
      for (int j = c; j < m; ++j) lp.add_var(Rat(0), Rat(1));
      std::vector<Rat> costs(m - c);
      for (int j = c; j < m; ++j) costs[j - c] = g.candidates[j].cost;
      lp.add_row(std::move(costs), Rel::Le, left);
      for (int i = 0; i < g.n; ++i) {
        if (need[i] <= 0) continue;
        std::vector<Rat> row(m - c);
        for (int j = c; j < m; ++j) row[j - c] = g.candidates[j].values[i];
        lp.add_row(std::move(row), Rel::Ge, need[i]);
      }
      if (solve_lp(lp).status != LpStatus::Optimal) return false;
      for (long v = g.candidates[c].cost <= left ? 1 : 0; v >= 0; --v) {
        chosen[c] = v;
        if (v) {
          left -= g.candidates[c].cost;
          for (int i = 0; i < g.n; ++i) need[i] -= g.candidates[c].values[i];
        }
        if (dfs(c + 1)) return true;
        if (v) {
          left += g.candidates[c].cost;
          for (int i = 0; i < g.n; ++i) need[i] += g.candidates[c].values[i];
        }
        chosen[c] = 0;
      }
      return false;
    };
    dfs(0);
  }
  return report;
}

// --- JSON ---

GeneralInstance general_from_json(const std::string& text) {
  json j = json::parse(text);
  GeneralInstance g;
  g.n = j.at("n").get<int>();
  g.fractional_budget = parse_rat(j.at("fractional_budget").get<std::string>());
  g.integral_budget = parse_rat(j.at("integral_budget").get<std::string>());
  for (const auto& c : j.at("candidates")) {
    GeneralInstance::Candidate cand;
    cand.cost = parse_rat(c.at("cost").get<std::string>());
    if (cand.cost <= 0) throw precondition_error("candidate costs must be positive");
    for (const auto& v : c.at("values")) cand.values.push_back(parse_rat(v.get<std::string>()));
    if ((int)cand.values.size() != g.n)
      throw precondition_error("valuation column length does not match voter count");
    g.candidates.push_back(std::move(cand));
  }
  return g;
}

GeneralInstance load_general(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw precondition_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return general_from_json(ss.str());
}

}  // namespace corelect
