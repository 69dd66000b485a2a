#include "corelect/lp.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

#include "corelect/errors.hpp"

namespace corelect {

int LinearProgram::add_var(std::optional<Rat> lo, std::optional<Rat> hi) {
  lower.push_back(std::move(lo));
  upper.push_back(std::move(hi));
  return num_vars++;
}

void LinearProgram::add_row(std::vector<Rat> coeffs, Rel rel, Rat rhs) {
  if ((int)coeffs.size() != num_vars) throw precondition_error("LP row width mismatch");
  rows.push_back(Row{std::move(coeffs), rel, std::move(rhs)});
}

namespace {

// Standard-form tableau: minimize c'y subject to Ay = b, y >= 0, b >= 0.
struct Tableau {
  int m = 0, nv = 0;                  // rows, structural+slack+artificial vars
  std::vector<std::vector<Rat>> a;    // m x nv
  std::vector<Rat> b;                 // m
  std::vector<int> basis;             // m, indices into columns
  std::vector<Rat> cost;              // reduced cost row, nv
  Rat obj_val = 0;                    // current objective value (minimization)

  void pivot(int row, int col) {
    Rat p = a[row][col];
    for (int j = 0; j < nv; ++j) a[row][j] /= p;
    b[row] /= p;
    for (int i = 0; i < m; ++i) {
      if (i == row || a[i][col] == 0) continue;
      Rat f = a[i][col];
      for (int j = 0; j < nv; ++j) a[i][j] -= f * a[row][j];
      b[i] -= f * b[row];
    }
    Rat f = cost[col];
    if (f != 0) {
      for (int j = 0; j < nv; ++j) cost[j] -= f * a[row][j];
      obj_val += f * b[row];
    }
    basis[row] = col;
  }

  // Bland's rule. Returns Optimal or Unbounded.
  LpStatus run(const std::vector<bool>& allowed) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < nv; ++j)
        if (allowed[j] && cost[j] < 0) {
          enter = j;
          break;
        }
      if (enter < 0) return LpStatus::Optimal;
      int leave = -1;
      Rat best;
      for (int i = 0; i < m; ++i) {
        if (a[i][enter] <= 0) continue;
        Rat ratio = b[i] / a[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpOutcome solve_lp(const LinearProgram& lp) {
  // Map each original variable onto non-negative standard variables.
  // kind: 0 = lo + y, 1 = hi - y, 2 = y_plus - y_minus.
  struct VarMap {
    int kind;
    int idx;  // first standard index (y_minus = idx + 1 for kind 2)
    Rat shift;
  };
  std::vector<VarMap> vmap(lp.num_vars);
  int ns = 0;  // structural standard vars
  std::vector<LinearProgram::Row> extra_rows;
  for (int j = 0; j < lp.num_vars; ++j) {
    const auto& lo = lp.lower[j];
    const auto& hi = lp.upper[j];
    if (lo && hi && *hi < *lo) return {LpStatus::Infeasible, 0, {}};
    if (lo) {
      vmap[j] = {0, ns++, *lo};
      if (hi) {
        LinearProgram::Row r;
        r.coeffs.assign(lp.num_vars, Rat(0));
        r.coeffs[j] = 1;
        r.rel = Rel::Le;
        r.rhs = *hi;
        extra_rows.push_back(std::move(r));
      }
    } else if (hi) {
      vmap[j] = {1, ns++, *hi};
    } else {
      vmap[j] = {2, ns, 0};
      ns += 2;
    }
  }

  std::vector<LinearProgram::Row> all_rows = lp.rows;
  for (auto& r : extra_rows) all_rows.push_back(std::move(r));
  int m = (int)all_rows.size();

  // Objective in minimization form over standard vars.
  std::vector<Rat> c_std(ns, Rat(0));
  Rat obj_const = 0;
  if (!lp.objective.empty()) {
    for (int j = 0; j < lp.num_vars; ++j) {
      Rat cj = lp.objective[j];
      if (lp.maximize) cj = -cj;
      if (cj == 0) continue;
      switch (vmap[j].kind) {
        case 0:
          c_std[vmap[j].idx] += cj;
          obj_const += cj * vmap[j].shift;
          break;
        case 1:
          c_std[vmap[j].idx] -= cj;
          obj_const += cj * vmap[j].shift;
          break;
        case 2:
          c_std[vmap[j].idx] += cj;
          c_std[vmap[j].idx + 1] -= cj;
          break;
      }
    }
  }

  // Rows over standard vars, as equalities with slack, rhs >= 0, one
  // artificial per row.
  int n_slack = 0;
  for (const auto& r : all_rows)
    if (r.rel != Rel::Eq) ++n_slack;
  Tableau t;
  t.m = m;
  t.nv = ns + n_slack + m;
  t.a.assign(m, std::vector<Rat>(t.nv, Rat(0)));
  t.b.assign(m, Rat(0));
  t.basis.assign(m, -1);

  int slack_at = ns;
  for (int i = 0; i < m; ++i) {
    const auto& r = all_rows[i];
    Rat rhs = r.rhs;
    for (int j = 0; j < lp.num_vars; ++j) {
      const Rat& aj = r.coeffs[j];
      if (aj == 0) continue;
      switch (vmap[j].kind) {
        case 0:
          t.a[i][vmap[j].idx] += aj;
          rhs -= aj * vmap[j].shift;
          break;
        case 1:
          t.a[i][vmap[j].idx] -= aj;
          rhs -= aj * vmap[j].shift;
          break;
        case 2:
          t.a[i][vmap[j].idx] += aj;
          t.a[i][vmap[j].idx + 1] -= aj;
          break;
      }
    }
    if (r.rel == Rel::Le) {
      t.a[i][slack_at++] = 1;
    } else if (r.rel == Rel::Ge) {
      t.a[i][slack_at++] = -1;
    }
    t.b[i] = rhs;
    if (t.b[i] < 0) {
      for (int j = 0; j < t.nv; ++j) t.a[i][j] = -t.a[i][j];
      t.b[i] = -t.b[i];
    }
    int art = ns + n_slack + i;
    t.a[i][art] = 1;
    t.basis[i] = art;
  }

  int n_real = ns + n_slack;

  // Phase 1: minimize the sum of artificials.
  t.cost.assign(t.nv, Rat(0));
  t.obj_val = 0;
  for (int i = 0; i < m; ++i) {
    // reduced cost of artificial basis: subtract its row from the cost row
    for (int j = 0; j < n_real; ++j) t.cost[j] -= t.a[i][j];
    t.obj_val += t.b[i];
  }
  std::vector<bool> allowed(t.nv, true);
  LpStatus s1 = t.run(allowed);
  assert(s1 == LpStatus::Optimal);
  (void)s1;
  if (t.obj_val != 0) return {LpStatus::Infeasible, 0, {}};

  // Drive artificials out of the basis; redundant rows keep a zero-valued
  // artificial which is then banned from re-entering.
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < n_real) continue;
    int piv = -1;
    for (int j = 0; j < n_real; ++j)
      if (t.a[i][j] != 0) {
        piv = j;
        break;
      }
    if (piv >= 0) {
      Rat saved = t.obj_val;  // pivot at zero rhs must not move the objective
      t.pivot(i, piv);
      assert(t.obj_val == saved);
      (void)saved;
    }
  }
  for (int j = n_real; j < t.nv; ++j) allowed[j] = false;

  // Phase 2.
  t.cost.assign(t.nv, Rat(0));
  for (int j = 0; j < ns; ++j) t.cost[j] = c_std[j];
  t.obj_val = 0;
  for (int i = 0; i < m; ++i) {
    int bj = t.basis[i];
    Rat cb = bj < ns ? c_std[bj] : Rat(0);
    if (cb == 0) continue;
    for (int j = 0; j < t.nv; ++j) t.cost[j] -= cb * t.a[i][j];
    t.obj_val += cb * t.b[i];
  }
  LpStatus s2 = t.run(allowed);
  if (s2 == LpStatus::Unbounded) return {LpStatus::Unbounded, 0, {}};

  // Recover original variable values.
  std::vector<Rat> y(t.nv, Rat(0));
  for (int i = 0; i < m; ++i) y[t.basis[i]] = t.b[i];
  LpOutcome out;
  out.status = LpStatus::Optimal;
  out.solution.assign(lp.num_vars, Rat(0));
  for (int j = 0; j < lp.num_vars; ++j) {
    switch (vmap[j].kind) {
      case 0: out.solution[j] = vmap[j].shift + y[vmap[j].idx]; break;
      case 1: out.solution[j] = vmap[j].shift - y[vmap[j].idx]; break;
      case 2: out.solution[j] = y[vmap[j].idx] - y[vmap[j].idx + 1]; break;
    }
  }
  Rat val = t.obj_val + obj_const;
  out.value = lp.maximize ? Rat(-val) : val;
  return out;
}

namespace {

// Shared builder for the fractional-committee demand system.
LinearProgram demand_lp(const Instance& instance, const std::vector<TypeMask>& types,
                        const UtilityVector& u) {
  LinearProgram lp;
  for (TypeMask r : types) lp.add_var(Rat(0), Rat(instance.supply_of(r)));
  for (int i = 0; i < instance.n; ++i) {
    if (u.values[i] <= 0) continue;  // vacuous demand
    std::vector<Rat> row(lp.num_vars, Rat(0));
    for (int j = 0; j < (int)types.size(); ++j)
      if (contains(types[j], i)) row[j] = 1;
    lp.add_row(std::move(row), Rel::Ge, u.values[i]);
  }
  return lp;
}

Committee committee_from(const std::vector<TypeMask>& types, const std::vector<Rat>& sol) {
  Committee x;
  x.integral = false;
  for (int j = 0; j < (int)types.size(); ++j)
    if (sol[j] != 0) x.amounts[types[j]] = sol[j];
  return x;
}

}  // namespace

std::optional<Committee> fractional_feasible(const Instance& instance, const UtilityVector& u,
                                             const Rat& budget) {
  if ((int)u.values.size() != instance.n) throw precondition_error("utility vector length != n");
  if (budget < 0) throw precondition_error("negative budget");
  auto types = instance.active_types();
  LinearProgram lp = demand_lp(instance, types, u);
  std::vector<Rat> size_row(lp.num_vars, Rat(1));
  lp.add_row(std::move(size_row), Rel::Le, budget);
  LpOutcome res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) return std::nullopt;
  return committee_from(types, res.solution);
}

std::optional<TauResult> tau(const Instance& instance, const UtilityVector& u) {
  if ((int)u.values.size() != instance.n) throw precondition_error("utility vector length != n");
  auto types = instance.active_types();
  LinearProgram lp = demand_lp(instance, types, u);
  lp.objective.assign(lp.num_vars, Rat(1));
  lp.maximize = false;
  LpOutcome res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) return std::nullopt;
  return TauResult{res.value, committee_from(types, res.solution)};
}

namespace {

// |det| of a 0/1 matrix given as row bitmasks, by fraction-free elimination.
long long binary_abs_det(const std::vector<int>& rows, int order) {
  // Bareiss on small integer matrices; values stay tiny for order <= 5.
  long long m[5][5];
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) m[i][j] = (rows[i] >> j) & 1;
  long long det = 1;
  int sign = 1;
  for (int col = 0; col < order; ++col) {
    int piv = -1;
    for (int i = col; i < order; ++i)
      if (m[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return 0;
    if (piv != col) {
      for (int j = 0; j < order; ++j) std::swap(m[piv][j], m[col][j]);
      sign = -sign;
    }
    for (int i = col + 1; i < order; ++i) {
      for (int j = col + 1; j < order; ++j) m[i][j] = m[i][j] * m[col][col] - m[i][col] * m[col][j];
      m[i][col] = 0;
      if (col > 0)
        for (int j = col + 1; j < order; ++j) m[i][j] /= det;
    }
    det = m[col][col];
  }
  long long d = det * sign;
  return d < 0 ? -d : d;
}

}  // namespace

Int compute_L(int n) {
  if (n < 1 || n > 5) throw unsupported_error("compute_L supports 1 <= n <= 5");
  long long l = 1;
  for (int order = 1; order <= n; ++order) {
    // |det| is invariant under row permutation and vanishes on repeated
    // rows, so strictly increasing row tuples cover every attainable value.
    int limit = 1 << order;
    std::vector<int> rows(order);
    auto rec = [&](auto&& self, int depth, int start) -> void {
      if (depth == order) {
        long long d = binary_abs_det(rows, order);
        if (d != 0) l = std::lcm(l, d);
        return;
      }
      for (int r = start; r < limit; ++r) {
        rows[depth] = r;
        self(self, depth + 1, r + 1);
      }
    };
    rec(rec, 0, 1);
  }
  return Int((long)l);
}

}  // namespace corelect
