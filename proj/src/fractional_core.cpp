#include "corelect/fractional_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "corelect/errors.hpp"
#include "corelect/lp.hpp"

namespace corelect {

namespace {

// Maximizes min-slack t over deviations y in P_S; a positive optimum means
// every member of S strictly gains.
struct BlockOutcome {
  Rat gain;
  Committee deviation;
};

std::optional<BlockOutcome> best_block(const Instance& instance,
                                       const std::vector<TypeMask>& types,
                                       const UtilityVector& u, CoalitionMask s) {
  LinearProgram lp;
  for (TypeMask r : types) lp.add_var(Rat(0), Rat(instance.supply_of(r)));
  int t_var = lp.add_var(std::nullopt, std::nullopt);
  int nv = lp.num_vars;

  std::vector<Rat> budget_row(nv, Rat(0));
  for (int j = 0; j < (int)types.size(); ++j) budget_row[j] = 1;
  lp.add_row(std::move(budget_row), Rel::Le, coalition_budget(instance, {s}));

  for (int i : members(s)) {
    std::vector<Rat> row(nv, Rat(0));
    for (int j = 0; j < (int)types.size(); ++j)
      if (contains(types[j], i)) row[j] = 1;
    row[t_var] = -1;
    lp.add_row(std::move(row), Rel::Ge, u.values[i]);
  }

  lp.maximize = true;
  lp.objective.assign(nv, Rat(0));
  lp.objective[t_var] = 1;
  auto out = solve_lp(lp);
  if (out.status != LpStatus::Optimal || out.value <= 0) return std::nullopt;

  BlockOutcome b;
  b.gain = out.value;
  b.deviation.integral = false;
  for (int j = 0; j < (int)types.size(); ++j)
    if (out.solution[j] != 0) b.deviation.amounts[types[j]] = out.solution[j];
  return b;
}

// Smoothed proportional-fairness objective and its gradient, in doubles.
struct Ascent {
  const std::vector<TypeMask>& types;
  std::vector<double> caps;
  std::vector<std::pair<double, TypeMask>> weights;  // (w_i, approval mask) for b_i > 0
  double k;

  double voter_utility(const std::vector<double>& x, TypeMask approvals) const {
    double u = 0;
    for (std::size_t j = 0; j < types.size(); ++j)
      if (types[j] & approvals) u += x[j];
    return u;
  }

  double value(const std::vector<double>& x, double sigma) const {
    double f = 0;
    for (const auto& [b, approvals] : weights)
      f += b * std::log(voter_utility(x, approvals) + sigma);
    return f;
  }

  std::vector<double> gradient(const std::vector<double>& x, double sigma) const {
    std::vector<double> g(types.size(), 0.0);
    for (const auto& [b, approvals] : weights) {
      double w = b / (voter_utility(x, approvals) + sigma);
      for (std::size_t j = 0; j < types.size(); ++j)
        if (types[j] & approvals) g[j] += w;
    }
    return g;
  }

  // Linear maximization over {0 <= x <= caps, sum x <= k}: fill the
  // highest-gradient types first.
  std::vector<double> vertex(const std::vector<double>& g) const {
    std::vector<std::size_t> order(types.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return g[a] > g[b]; });
    std::vector<double> s(types.size(), 0.0);
    double left = k;
    for (std::size_t j : order) {
      if (left <= 0 || g[j] <= 0) break;
      double take = std::min(caps[j], left);
      s[j] = take;
      left -= take;
    }
    return s;
  }

  // Frank-Wolfe with ternary-search line steps.
  void run(std::vector<double>& x, double sigma, int iters) const {
    for (int it = 0; it < iters; ++it) {
      auto g = gradient(x, sigma);
      auto s = vertex(g);
      double gap = 0;
      for (std::size_t j = 0; j < x.size(); ++j) gap += g[j] * (s[j] - x[j]);
      if (gap <= 1e-14) break;
      double lo = 0, hi = 1;
      for (int step = 0; step < 60; ++step) {
        double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
        auto at = [&](double gamma) {
          std::vector<double> p(x.size());
          for (std::size_t j = 0; j < x.size(); ++j) p[j] = x[j] + gamma * (s[j] - x[j]);
          return value(p, sigma);
        };
        if (at(a) < at(b))
          lo = a;
        else
          hi = b;
      }
      double gamma = (lo + hi) / 2;
      for (std::size_t j = 0; j < x.size(); ++j) x[j] += gamma * (s[j] - x[j]);
    }
  }

  // Imputed per-voter spending: each selected type's cost is split among its
  // approvers in proportion to w_i / u_i, matching the supporting prices of
  // the weighted objective.
  std::vector<double> spending(const std::vector<double>& x, double sigma) const {
    std::vector<double> paid(weights.size(), 0.0);
    std::vector<double> rate(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
      rate[i] = weights[i].first / (voter_utility(x, weights[i].second) + sigma);
    for (std::size_t j = 0; j < types.size(); ++j) {
      if (x[j] <= 1e-12) continue;
      double total = 0;
      for (std::size_t i = 0; i < weights.size(); ++i)
        if (types[j] & weights[i].second) total += rate[i];
      if (total <= 0) continue;
      for (std::size_t i = 0; i < weights.size(); ++i)
        if (types[j] & weights[i].second) paid[i] += x[j] * rate[i] / total;
    }
    return paid;
  }
};

}  // namespace

std::optional<std::pair<Coalition, Committee>> verify_fractional_core(const Instance& instance,
                                                                      const Committee& x) {
  auto types = instance.active_types();
  auto u = utility(instance, x);
  for (CoalitionMask s = 1; s < (CoalitionMask(1) << instance.n); ++s) {
    auto b = best_block(instance, types, u, s);
    if (b) return std::make_pair(Coalition{s}, std::move(b->deviation));
  }
  return std::nullopt;
}

FractionalCorePoint approx_fractional_core(const Instance& instance, const Rat& epsilon) {
  if (epsilon <= 0) throw precondition_error("epsilon must be positive");
  auto types = instance.active_types();
  if (types.empty() && instance.k > 0)
    throw precondition_error("no candidates available for a non-trivial committee");

  auto bump = [&](Committee x) -> Committee {
    x.integral = false;
    // Per-voter residual bump: grant every positive-budget voter up to
    // epsilon/(n+1) extra approved mass, within remaining supply.
    Rat ehat = epsilon / Rat(instance.n + 1);
    for (int i = 0; i < instance.n; ++i) {
      if (instance.budgets[i] <= 0) continue;
      Rat residual(0);
      for (TypeMask r : types)
        if (contains(r, i)) residual += Rat(instance.supply_of(r)) - x.amount_of(r);
      Rat alpha = std::min(ehat, residual);
      for (TypeMask r : types) {
        if (alpha <= 0) break;
        if (!contains(r, i)) continue;
        Rat room = Rat(instance.supply_of(r)) - x.amount_of(r);
        Rat add = std::min(alpha, room);
        if (add > 0) {
          x.amounts[r] += add;
          alpha -= add;
        }
      }
    }
    x.normalize();
    return x;
  };

  // With enough budget for everyone, the full supply is stable outright.
  Rat total(0);
  for (TypeMask r : types) total += instance.supply_of(r);
  if (total <= instance.k) {
    Committee full;
    full.integral = false;
    for (TypeMask r : types) full.amounts[r] = instance.supply_of(r);
    if (verify_fractional_core(instance, full))
      throw invariant_error("full-supply committee rejected by the blocking check");
    return FractionalCorePoint{std::move(full), epsilon, true};
  }

  Ascent ascent{types, {}, {}, double(instance.k)};
  for (TypeMask r : types) ascent.caps.push_back(double(instance.supply_of(r)));
  std::vector<double> budget;  // parallel to ascent.weights
  for (int i = 0; i < instance.n; ++i)
    if (instance.budgets[i] > 0) {
      ascent.weights.emplace_back(instance.budgets[i].get_d(), TypeMask(1) << i);
      budget.push_back(instance.budgets[i].get_d());
    }

  std::vector<double> xf(types.size(), 0.0);
  const Int denom = Int(1) << 40;
  std::string last_block;

  const int kMaxRounds = 12;
  for (int round = 0; round < kMaxRounds; ++round) {
    double sigma = 1.0;
    double sigma_min = std::pow(10.0, -(round + 3));
    while (true) {
      ascent.run(xf, sigma, 800 + 400 * round);
      if (sigma <= sigma_min) break;
      sigma = std::max(sigma / 10.0, sigma_min);
    }

    // When supplies bind, the selected types earn scarcity rent and the
    // plain weighted optimum can leave some voters underspending: their
    // coalition could then afford strictly more than the point grants them.
    // Rebalance the weights until imputed spending matches the budgets; the
    // fixed point is a market (Lindahl) equilibrium, which is unblocked.
    for (int sweep = 0; sweep < 80; ++sweep) {
      auto paid = ascent.spending(xf, sigma_min);
      double worst = 0;
      for (std::size_t i = 0; i < budget.size(); ++i) {
        double ratio = paid[i] > 0 ? budget[i] / paid[i] : 2.0;
        double& w = ascent.weights[i].first;
        double adjusted = std::clamp(w * std::pow(std::clamp(ratio, 0.5, 2.0), 0.7),
                                     budget[i] * 1e-6, budget[i] * 1e6);
        if (adjusted != w) worst = std::max(worst, std::abs(ratio - 1.0));
        w = adjusted;
      }
      if (worst < 1e-8) break;
      ascent.run(xf, sigma_min, 300);
    }

    // Snap to rationals, clamp into the polytope exactly.
    Committee x;
    x.integral = false;
    Rat size(0);
    for (std::size_t j = 0; j < types.size(); ++j) {
      Int num(long(std::llround(xf[j] * denom.get_d())));
      Rat v(num, denom);
      v.canonicalize();
      v = std::min(std::max(v, Rat(0)), Rat(instance.supply_of(types[j])));
      if (v != 0) x.amounts[types[j]] = v;
      size += v;
    }
    if (size > instance.k && size > 0) {
      Rat scale = Rat(instance.k) / size;
      for (auto& [r, v] : x.amounts) {
        v *= scale;
        v.canonicalize();
      }
    }

    Committee bumped = bump(std::move(x));
    auto blocker = verify_fractional_core(instance, bumped);
    if (!blocker) return FractionalCorePoint{std::move(bumped), epsilon, true};

    std::ostringstream os;
    os << "coalition {";
    bool first = true;
    for (int i : blocker->first.voters()) {
      if (!first) os << ",";
      os << (i + 1);
      first = false;
    }
    os << "} still blocks";
    last_block = os.str();
  }
  throw convergence_error("fractional-core ascent did not verify after " +
                          std::to_string(kMaxRounds) + " refinement rounds; " +
                          (last_block.empty() ? std::string("no certificate recorded")
                                              : last_block));
}

}  // namespace corelect
