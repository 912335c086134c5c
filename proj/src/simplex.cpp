#include "lsflow/simplex.hpp"

#include <cmath>
#include <limits>

#include "lsflow/errors.hpp"

namespace lsflow::simplex {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDTol = 1e-9;    // reduced-cost optimality tolerance
constexpr double kPivTol = 1e-9;  // minimum pivot magnitude
constexpr double kFeasTol = 1e-7;

enum class VarState : signed char { kBasic, kAtLo, kAtHi };

// Dense tableau solver state. Columns: structurals, slacks for <= rows,
// one artificial per row.
struct Tableau {
  int n_struct = 0;
  int n_slack = 0;
  int n_cols = 0;
  int m = 0;
  std::vector<double> t;  // m x n_cols, row-major
  std::vector<double> xb;
  std::vector<int> basis;
  std::vector<VarState> state;
  std::vector<double> lo, hi, val;  // val meaningful for nonbasic vars
  std::vector<double> d;            // reduced costs
  long degenerate_streak = 0;

  double* row(int r) { return t.data() + static_cast<std::size_t>(r) * n_cols; }
  const double* row(int r) const {
    return t.data() + static_cast<std::size_t>(r) * n_cols;
  }
};

void pivot(Tableau& tb, int r, int j) {
  double* pr = tb.row(r);
  const double piv = pr[j];
  const double inv = 1.0 / piv;
  for (int k = 0; k < tb.n_cols; ++k) pr[k] *= inv;
  pr[j] = 1.0;
  for (int r2 = 0; r2 < tb.m; ++r2) {
    if (r2 == r) continue;
    double* pr2 = tb.row(r2);
    const double f = pr2[j];
    if (f == 0.0) continue;
    for (int k = 0; k < tb.n_cols; ++k) pr2[k] -= f * pr[k];
    pr2[j] = 0.0;
  }
  const double fd = tb.d[static_cast<std::size_t>(j)];
  if (fd != 0.0) {
    for (int k = 0; k < tb.n_cols; ++k) tb.d[static_cast<std::size_t>(k)] -= fd * pr[k];
    tb.d[static_cast<std::size_t>(j)] = 0.0;
  }
}

// Runs simplex iterations for the current reduced costs. Returns false if an
// unbounded ray is detected (guarded; cannot occur for well-formed inputs).
bool iterate(Tableau& tb, long max_iters) {
  for (long iter = 0; iter < max_iters; ++iter) {
    const bool bland = tb.degenerate_streak > 200;
    int enter = -1;
    double best = kDTol;
    for (int j = 0; j < tb.n_cols; ++j) {
      if (tb.state[static_cast<std::size_t>(j)] == VarState::kBasic) continue;
      if (tb.hi[static_cast<std::size_t>(j)] - tb.lo[static_cast<std::size_t>(j)] <= 0.0)
        continue;
      const double dj = tb.d[static_cast<std::size_t>(j)];
      double score = 0.0;
      if (tb.state[static_cast<std::size_t>(j)] == VarState::kAtLo && dj < -kDTol)
        score = -dj;
      else if (tb.state[static_cast<std::size_t>(j)] == VarState::kAtHi && dj > kDTol)
        score = dj;
      if (score > best) {
        best = score;
        enter = j;
        if (bland) break;  // smallest eligible index
      }
    }
    if (enter < 0) return true;  // optimal for current costs

    const double dir =
        tb.state[static_cast<std::size_t>(enter)] == VarState::kAtLo ? 1.0 : -1.0;
    double tstar =
        tb.hi[static_cast<std::size_t>(enter)] - tb.lo[static_cast<std::size_t>(enter)];
    int leave_row = -1;
    bool leave_at_hi = false;
    for (int r = 0; r < tb.m; ++r) {
      const double alpha = tb.row(r)[enter] * dir;
      const int bv = tb.basis[static_cast<std::size_t>(r)];
      if (alpha > kPivTol) {
        const double room = tb.xb[static_cast<std::size_t>(r)] -
                            tb.lo[static_cast<std::size_t>(bv)];
        const double step = room / alpha;
        if (step < tstar - 1e-12 ||
            (step < tstar + 1e-12 && leave_row >= 0 &&
             bv < tb.basis[static_cast<std::size_t>(leave_row)])) {
          tstar = std::max(step, 0.0);
          leave_row = r;
          leave_at_hi = false;
        }
      } else if (alpha < -kPivTol) {
        if (tb.hi[static_cast<std::size_t>(bv)] == kInf) continue;
        const double room = tb.hi[static_cast<std::size_t>(bv)] -
                            tb.xb[static_cast<std::size_t>(r)];
        const double step = room / (-alpha);
        if (step < tstar - 1e-12 ||
            (step < tstar + 1e-12 && leave_row >= 0 &&
             bv < tb.basis[static_cast<std::size_t>(leave_row)])) {
          tstar = std::max(step, 0.0);
          leave_row = r;
          leave_at_hi = true;
        }
      }
    }
    if (tstar == kInf) return false;  // unbounded ray

    tb.degenerate_streak = tstar < 1e-12 ? tb.degenerate_streak + 1 : 0;

    for (int r = 0; r < tb.m; ++r)
      tb.xb[static_cast<std::size_t>(r)] -= tb.row(r)[enter] * dir * tstar;

    if (leave_row < 0) {
      // Bound flip: the entering variable travels to its opposite bound.
      auto& st = tb.state[static_cast<std::size_t>(enter)];
      st = st == VarState::kAtLo ? VarState::kAtHi : VarState::kAtLo;
      tb.val[static_cast<std::size_t>(enter)] =
          st == VarState::kAtLo ? tb.lo[static_cast<std::size_t>(enter)]
                                : tb.hi[static_cast<std::size_t>(enter)];
      continue;
    }

    const int leave = tb.basis[static_cast<std::size_t>(leave_row)];
    tb.state[static_cast<std::size_t>(leave)] =
        leave_at_hi ? VarState::kAtHi : VarState::kAtLo;
    tb.val[static_cast<std::size_t>(leave)] =
        leave_at_hi ? tb.hi[static_cast<std::size_t>(leave)]
                    : tb.lo[static_cast<std::size_t>(leave)];
    const double enter_val = tb.val[static_cast<std::size_t>(enter)] + dir * tstar;
    tb.state[static_cast<std::size_t>(enter)] = VarState::kBasic;
    tb.basis[static_cast<std::size_t>(leave_row)] = enter;
    tb.xb[static_cast<std::size_t>(leave_row)] = enter_val;
    pivot(tb, leave_row, enter);
  }
  fail(ErrorCode::kResourceExhausted, "simplex: iteration limit reached");
}

void set_costs(Tableau& tb, std::span<const double> costs) {
  // d_j = c_j - cB . T[:,j], recomputed from scratch.
  tb.d.assign(static_cast<std::size_t>(tb.n_cols), 0.0);
  for (int j = 0; j < tb.n_cols; ++j)
    tb.d[static_cast<std::size_t>(j)] =
        j < static_cast<int>(costs.size()) ? costs[static_cast<std::size_t>(j)] : 0.0;
  for (int r = 0; r < tb.m; ++r) {
    const int bv = tb.basis[static_cast<std::size_t>(r)];
    const double cb =
        bv < static_cast<int>(costs.size()) ? costs[static_cast<std::size_t>(bv)] : 0.0;
    if (cb == 0.0) continue;
    const double* pr = tb.row(r);
    for (int k = 0; k < tb.n_cols; ++k) tb.d[static_cast<std::size_t>(k)] -= cb * pr[k];
  }
}

}  // namespace

LpSolution solve_lp(const ilp::IlpInstance& inst, std::span<const signed char> fixed) {
  inst.validate();
  const int n = inst.n;
  const int m_ub = static_cast<int>(inst.a_ub.size());
  const int m_eq = static_cast<int>(inst.a_eq.size());
  const int m = m_ub + m_eq;

  Tableau tb;
  tb.n_struct = n;
  tb.n_slack = m_ub;
  tb.n_cols = n + m_ub + m;  // structurals, slacks, artificials
  tb.m = m;
  tb.t.assign(static_cast<std::size_t>(m) * tb.n_cols, 0.0);
  tb.xb.assign(static_cast<std::size_t>(m), 0.0);
  tb.basis.assign(static_cast<std::size_t>(m), -1);
  tb.state.assign(static_cast<std::size_t>(tb.n_cols), VarState::kAtLo);
  tb.lo.assign(static_cast<std::size_t>(tb.n_cols), 0.0);
  tb.hi.assign(static_cast<std::size_t>(tb.n_cols), 0.0);
  tb.val.assign(static_cast<std::size_t>(tb.n_cols), 0.0);

  for (int j = 0; j < n; ++j) {
    double lo = 0.0, hi = 1.0;
    if (!fixed.empty()) {
      if (fixed[static_cast<std::size_t>(j)] == 0) hi = 0.0;
      if (fixed[static_cast<std::size_t>(j)] == 1) lo = 1.0;
    }
    tb.lo[static_cast<std::size_t>(j)] = lo;
    tb.hi[static_cast<std::size_t>(j)] = hi;
    tb.val[static_cast<std::size_t>(j)] = lo;
    if (lo > hi) {  // contradictory fixing
      LpSolution bad;
      bad.status = LpStatus::kInfeasible;
      return bad;
    }
  }
  for (int s = 0; s < m_ub; ++s) tb.hi[static_cast<std::size_t>(n + s)] = kInf;
  // artificial bounds [0, inf) until phase 1 pins them

  bool any_artificial = false;
  for (int r = 0; r < m; ++r) {
    const bool is_ub = r < m_ub;
    const std::vector<double>& arow = is_ub ? inst.a_ub[static_cast<std::size_t>(r)]
                                            : inst.a_eq[static_cast<std::size_t>(r - m_ub)];
    const double brhs = is_ub ? inst.b_ub[static_cast<std::size_t>(r)]
                              : inst.b_eq[static_cast<std::size_t>(r - m_ub)];
    double rho = brhs;
    for (int j = 0; j < n; ++j) rho -= arow[static_cast<std::size_t>(j)] * tb.val[static_cast<std::size_t>(j)];

    double* pr = tb.row(r);
    const double sign = rho >= 0.0 ? 1.0 : -1.0;
    for (int j = 0; j < n; ++j) pr[j] = sign * arow[static_cast<std::size_t>(j)];
    if (is_ub) pr[n + r] = sign;  // slack column
    const int art = n + m_ub + r;

    if (is_ub && rho >= 0.0) {
      // Slack starts basic and feasible; pin its artificial to zero.
      tb.basis[static_cast<std::size_t>(r)] = n + r;
      tb.state[static_cast<std::size_t>(n + r)] = VarState::kBasic;
      tb.xb[static_cast<std::size_t>(r)] = rho;
      tb.hi[static_cast<std::size_t>(art)] = 0.0;
    } else {
      pr[art] = 1.0;
      tb.hi[static_cast<std::size_t>(art)] = kInf;
      tb.basis[static_cast<std::size_t>(r)] = art;
      tb.state[static_cast<std::size_t>(art)] = VarState::kBasic;
      tb.xb[static_cast<std::size_t>(r)] = std::abs(rho);
      any_artificial = true;
    }
  }

  const long max_iters = 20000 + 200L * (tb.m + tb.n_cols);

  LpSolution out;
  if (any_artificial) {
    std::vector<double> phase1(static_cast<std::size_t>(tb.n_cols), 0.0);
    for (int r = 0; r < m; ++r) phase1[static_cast<std::size_t>(n + m_ub + r)] = 1.0;
    set_costs(tb, phase1);
    if (!iterate(tb, max_iters)) {
      out.status = LpStatus::kUnboundedGuarded;
      return out;
    }
    double art_sum = 0.0;
    for (int r = 0; r < m; ++r)
      if (tb.basis[static_cast<std::size_t>(r)] >= n + m_ub)
        art_sum += tb.xb[static_cast<std::size_t>(r)];
    if (art_sum > kFeasTol) {
      out.status = LpStatus::kInfeasible;
      return out;
    }
    // Pin artificials so phase 2 can never reuse them. Basic-at-zero
    // artificials are forced out by the zero-width bound during ratio tests.
    for (int r = 0; r < m; ++r) {
      const int art = n + m_ub + r;
      tb.hi[static_cast<std::size_t>(art)] = 0.0;
      if (tb.state[static_cast<std::size_t>(art)] != VarState::kBasic)
        tb.val[static_cast<std::size_t>(art)] = 0.0;
    }
  }

  std::vector<double> phase2(static_cast<std::size_t>(tb.n_cols), 0.0);
  for (int j = 0; j < n; ++j) phase2[static_cast<std::size_t>(j)] = inst.objective[static_cast<std::size_t>(j)];
  tb.degenerate_streak = 0;
  set_costs(tb, phase2);
  if (!iterate(tb, max_iters)) {
    out.status = LpStatus::kUnboundedGuarded;
    return out;
  }

  out.x.assign(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j)
    out.x[static_cast<std::size_t>(j)] = tb.val[static_cast<std::size_t>(j)];
  for (int r = 0; r < m; ++r) {
    const int bv = tb.basis[static_cast<std::size_t>(r)];
    if (bv < n) out.x[static_cast<std::size_t>(bv)] = tb.xb[static_cast<std::size_t>(r)];
  }
  double obj = 0.0;
  for (int j = 0; j < n; ++j)
    obj += inst.objective[static_cast<std::size_t>(j)] * out.x[static_cast<std::size_t>(j)];
  out.objective = obj;
  out.status = LpStatus::kOptimal;
  return out;
}

LpSolution solve_lp(const ilp::IlpInstance& inst) {
  return solve_lp(inst, std::span<const signed char>());
}

}  // namespace lsflow::simplex
