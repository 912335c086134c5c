#include "lsflow/bnb.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>

#include "lsflow/errors.hpp"
#include "lsflow/simplex.hpp"

namespace lsflow::bnb {

namespace {

constexpr double kIntTol = 1e-7;
constexpr double kFeasTol = 1e-7;

double exact_objective(const ilp::IlpInstance& inst, const std::vector<std::uint8_t>& x) {
  double obj = 0.0;
  for (int j = 0; j < inst.n; ++j)
    if (x[static_cast<std::size_t>(j)]) obj += inst.objective[static_cast<std::size_t>(j)];
  return obj;
}

struct Node {
  double bound;
  std::uint64_t id;
  std::vector<signed char> fixed;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

// Index of the most fractional free variable, or -1 when the LP point is
// integral on the free variables.
int pick_branch_var(const std::vector<double>& x, const std::vector<signed char>& fixed) {
  int best = -1;
  double best_frac = kIntTol;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (fixed[j] != -1) continue;
    const double f = std::min(x[j], 1.0 - x[j]);
    if (f > best_frac) {
      best_frac = f;
      best = static_cast<int>(j);
    }
  }
  return best;
}

std::vector<std::uint8_t> round_solution(const std::vector<double>& x,
                                         const std::vector<signed char>& fixed) {
  std::vector<std::uint8_t> bits(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    bits[j] = fixed[j] != -1 ? static_cast<std::uint8_t>(fixed[j]) : (x[j] > 0.5 ? 1 : 0);
  return bits;
}

struct SearchBudget {
  std::uint64_t remaining;

  void charge() {
    if (remaining == 0)
      fail(ErrorCode::kResourceExhausted, "bnb: node budget exceeded");
    --remaining;
  }
};

// Best-first search for the minimum objective over 0/1 points. When `cutoff`
// is set, returns the first integral point with objective <= cutoff instead
// (feasibility mode for the lexicographic completion).
std::optional<ilp::IlpSolution> search(const ilp::IlpInstance& inst,
                                       const std::vector<signed char>& root_fixed,
                                       std::optional<double> cutoff,
                                       SearchBudget& budget) {
  std::priority_queue<Node, std::vector<Node>, NodeOrder> queue;
  std::uint64_t next_id = 0;

  std::optional<std::vector<std::uint8_t>> incumbent;
  double incumbent_obj = 0.0;

  queue.push(Node{-HUGE_VAL, next_id++, root_fixed});
  while (!queue.empty()) {
    Node node = queue.top();
    queue.pop();

    if (cutoff && node.bound > *cutoff) continue;
    if (!cutoff && incumbent &&
        node.bound >= incumbent_obj - 1e-12 * (1.0 + std::abs(incumbent_obj)))
      continue;

    budget.charge();
    const simplex::LpSolution lp = simplex::solve_lp(inst, node.fixed);
    if (lp.status == simplex::LpStatus::kInfeasible) continue;
    if (lp.status != simplex::LpStatus::kOptimal)
      fail(ErrorCode::kNumeric, "bnb: LP relaxation did not solve");
    if (cutoff && lp.objective > *cutoff) continue;
    if (!cutoff && incumbent &&
        lp.objective >= incumbent_obj - 1e-12 * (1.0 + std::abs(incumbent_obj)))
      continue;
#ifndef NDEBUG
    // Relaxation bound never exceeds the best known 0/1 objective by more
    // than tolerance; a violation means the LP layer is returning garbage.
    if (incumbent)
      if (!(lp.objective <= incumbent_obj + ilp::objective_tol(incumbent_obj)))
        fail(ErrorCode::kNumeric, "bnb: LP bound above incumbent");
#endif

    const int branch = pick_branch_var(lp.x, node.fixed);
    if (branch < 0) {
      std::vector<std::uint8_t> bits = round_solution(lp.x, node.fixed);
      if (ilp::max_violation(inst, bits) > kFeasTol) continue;
      const double obj = exact_objective(inst, bits);
      if (cutoff) {
        if (obj <= *cutoff) {
          ilp::IlpSolution sol;
          sol.x = std::move(bits);
          sol.objective = obj;
          return sol;
        }
        continue;
      }
      if (!incumbent || obj < incumbent_obj) {
        incumbent = std::move(bits);
        incumbent_obj = obj;
      }
      continue;
    }

    // 0-branch first so equal-bound ties pop in lexicographic order.
    for (signed char v : {static_cast<signed char>(0), static_cast<signed char>(1)}) {
      Node child;
      child.bound = lp.objective;
      child.id = next_id++;
      child.fixed = node.fixed;
      child.fixed[static_cast<std::size_t>(branch)] = v;
      queue.push(std::move(child));
    }
  }

  if (cutoff) return std::nullopt;
  if (!incumbent) return std::nullopt;
  ilp::IlpSolution sol;
  sol.x = std::move(*incumbent);
  sol.objective = incumbent_obj;
  return sol;
}

ilp::IlpSolution solve_impl(const ilp::IlpInstance& inst, std::uint64_t node_budget) {
  inst.validate();
  SearchBudget budget{node_budget};
  std::vector<signed char> free_all(static_cast<std::size_t>(inst.n), -1);

  auto best = search(inst, free_all, std::nullopt, budget);
  if (!best)
    fail(ErrorCode::kInfeasible, "bnb: instance has no feasible 0/1 point");
  const double zstar = best->objective;
  const double cutoff = zstar + ilp::objective_tol(zstar);

  // Lexicographic completion: walk the variables front to back, forcing each
  // position to 0 whenever some optimal solution allows it. The current
  // witness caps the number of extra searches at the number of ones.
  std::vector<std::uint8_t> witness = best->x;
  std::vector<signed char> prefix(static_cast<std::size_t>(inst.n), -1);
  for (int j = 0; j < inst.n; ++j) {
    if (witness[static_cast<std::size_t>(j)] == 0) {
      prefix[static_cast<std::size_t>(j)] = 0;
      continue;
    }
    prefix[static_cast<std::size_t>(j)] = 0;
    auto alt = search(inst, prefix, cutoff, budget);
    if (alt) {
      witness = std::move(alt->x);
    } else {
      prefix[static_cast<std::size_t>(j)] = 1;
    }
  }

  ilp::IlpSolution sol;
  sol.x = std::move(witness);
  sol.objective = exact_objective(inst, sol.x);
  return sol;
}

bool unit_row(const std::vector<double>& row, int n, int& var) {
  var = -1;
  for (int j = 0; j < n; ++j) {
    const double v = row[static_cast<std::size_t>(j)];
    if (v == 0.0) continue;
    if (v != 1.0 || var != -1) return false;
    var = j;
  }
  return var != -1;
}

}  // namespace

ilp::IlpSolution solve(const ilp::IlpInstance& inst, std::uint64_t node_budget) {
  ilp::solver_call_counter().fetch_add(1, std::memory_order_relaxed);
  return solve_impl(inst, node_budget);
}

ilp::IlpSolution brute_force(const ilp::IlpInstance& inst) {
  ilp::solver_call_counter().fetch_add(1, std::memory_order_relaxed);
  inst.validate();
  if (inst.n > 22)
    fail(ErrorCode::kResourceExhausted, "brute_force: n must be <= 22");
  const std::uint64_t count = 1ULL << inst.n;
  const std::size_t m_ub = inst.a_ub.size(), m_eq = inst.a_eq.size();

  // Gray-code sweep with incremental row activities: one bit flips per step.
  std::vector<double> act_ub(m_ub, 0.0), act_eq(m_eq, 0.0);
  std::vector<std::uint8_t> x(static_cast<std::size_t>(inst.n), 0);
  double obj = 0.0;

  auto flip = [&](int j) {
    const double s = x[static_cast<std::size_t>(j)] ? -1.0 : 1.0;
    x[static_cast<std::size_t>(j)] ^= 1;
    obj += s * inst.objective[static_cast<std::size_t>(j)];
    for (std::size_t r = 0; r < m_ub; ++r) act_ub[r] += s * inst.a_ub[r][static_cast<std::size_t>(j)];
    for (std::size_t r = 0; r < m_eq; ++r) act_eq[r] += s * inst.a_eq[r][static_cast<std::size_t>(j)];
  };
  auto feasible = [&]() {
    for (std::size_t r = 0; r < m_ub; ++r)
      if (act_ub[r] > inst.b_ub[r] + kFeasTol) return false;
    for (std::size_t r = 0; r < m_eq; ++r)
      if (std::abs(act_eq[r] - inst.b_eq[r]) > kFeasTol) return false;
    return true;
  };

  // Pass 1: exact minimum objective.
  bool any = false;
  double zstar = 0.0;
  for (std::uint64_t i = 0;; ++i) {
    if (feasible() && (!any || obj < zstar)) {
      zstar = obj;
      any = true;
    }
    if (i + 1 >= count) break;
    flip(std::countr_zero(i + 1));
  }
  if (!any) fail(ErrorCode::kInfeasible, "brute_force: no feasible 0/1 point");

  // Reset state exactly for pass 2.
  std::fill(x.begin(), x.end(), 0);
  std::fill(act_ub.begin(), act_ub.end(), 0.0);
  std::fill(act_eq.begin(), act_eq.end(), 0.0);
  obj = 0.0;

  // Pass 2: lexicographically smallest vector among near-optimal points.
  const double cutoff = zstar + ilp::objective_tol(zstar);
  std::vector<std::uint8_t> lexmin;
  for (std::uint64_t i = 0;; ++i) {
    if (obj <= cutoff && feasible()) {
      if (lexmin.empty() || std::lexicographical_compare(x.begin(), x.end(),
                                                         lexmin.begin(), lexmin.end()))
        lexmin = x;
    }
    if (i + 1 >= count) break;
    flip(std::countr_zero(i + 1));
  }

  ilp::IlpSolution sol;
  sol.x = std::move(lexmin);
  sol.objective = exact_objective(inst, sol.x);
  return sol;
}

ilp::BinaryAction solve_budget_subset(std::span<const double> costs,
                                      std::span<const double> weights, double budget) {
  ilp::solver_call_counter().fetch_add(1, std::memory_order_relaxed);
  if (costs.size() != weights.size())
    fail(ErrorCode::kDimensionMismatch, "solve_budget_subset: length mismatch");
  if (!(budget >= 0.0))
    fail(ErrorCode::kDegenerateInput, "solve_budget_subset: budget must be >= 0");
  const std::size_t m = costs.size();

  bool unit = true;
  for (double w : weights)
    if (w != 1.0) {
      unit = false;
      break;
    }

  if (unit) {
    const auto cap = static_cast<std::size_t>(std::floor(budget + 1e-9));
    std::vector<int> idx;
    for (std::size_t j = 0; j < m; ++j)
      if (costs[j] < 0.0) idx.push_back(static_cast<int>(j));
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      if (costs[static_cast<std::size_t>(a)] != costs[static_cast<std::size_t>(b)])
        return costs[static_cast<std::size_t>(a)] < costs[static_cast<std::size_t>(b)];
      return a < b;
    });
    ilp::BinaryAction out;
    out.bits.assign(m, 0);
    for (std::size_t k = 0; k < idx.size() && k < cap; ++k)
      out.bits[static_cast<std::size_t>(idx[k])] = 1;
    return out;
  }

  ilp::IlpInstance inst;
  inst.n = static_cast<int>(m);
  inst.objective.assign(costs.begin(), costs.end());
  inst.a_ub.push_back(std::vector<double>(weights.begin(), weights.end()));
  inst.b_ub.push_back(budget);
  inst.action_coords.resize(m);
  for (std::size_t j = 0; j < m; ++j) inst.action_coords[j] = static_cast<int>(j);
  const ilp::IlpSolution sol = solve_impl(inst, kDefaultNodeBudget);
  return sol.action(inst);
}

ilp::IlpSolution solve_instance(const ilp::IlpInstance& inst) {
  ilp::solver_call_counter().fetch_add(1, std::memory_order_relaxed);
  inst.validate();

  // Budget-plus-fixings recognition: unit-row equalities pin variables, a
  // single all-ones row caps the rest. Covers the intervention and frontier
  // instances, which dominate training.
  const bool single_ub = inst.a_ub.size() == 1;
  bool budget_form = single_ub;
  if (budget_form)
    for (double v : inst.a_ub[0])
      if (v != 1.0) {
        budget_form = false;
        break;
      }
  std::vector<signed char> pin(static_cast<std::size_t>(inst.n), -1);
  if (budget_form) {
    for (std::size_t r = 0; r < inst.a_eq.size() && budget_form; ++r) {
      int var = -1;
      if (!unit_row(inst.a_eq[r], inst.n, var) ||
          (inst.b_eq[r] != 0.0 && inst.b_eq[r] != 1.0)) {
        budget_form = false;
        break;
      }
      const auto want = static_cast<signed char>(inst.b_eq[r]);
      if (pin[static_cast<std::size_t>(var)] != -1 &&
          pin[static_cast<std::size_t>(var)] != want)
        fail(ErrorCode::kInfeasible, "solve_instance: contradictory fixings");
      pin[static_cast<std::size_t>(var)] = want;
    }
  }

  if (budget_form) {
    double residual = inst.b_ub[0];
    for (int j = 0; j < inst.n; ++j)
      if (pin[static_cast<std::size_t>(j)] == 1) residual -= 1.0;
    if (residual < -1e-9)
      fail(ErrorCode::kInfeasible, "solve_instance: fixings exceed budget");
    const auto cap = static_cast<std::size_t>(std::floor(std::max(residual, 0.0) + 1e-9));
    std::vector<int> idx;
    for (int j = 0; j < inst.n; ++j)
      if (pin[static_cast<std::size_t>(j)] == -1 &&
          inst.objective[static_cast<std::size_t>(j)] < 0.0)
        idx.push_back(j);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
      const double ca = inst.objective[static_cast<std::size_t>(a)];
      const double cb = inst.objective[static_cast<std::size_t>(b)];
      if (ca != cb) return ca < cb;
      return a < b;
    });
    ilp::IlpSolution sol;
    sol.x.assign(static_cast<std::size_t>(inst.n), 0);
    for (int j = 0; j < inst.n; ++j)
      if (pin[static_cast<std::size_t>(j)] == 1) sol.x[static_cast<std::size_t>(j)] = 1;
    for (std::size_t k = 0; k < idx.size() && k < cap; ++k)
      sol.x[static_cast<std::size_t>(idx[k])] = 1;
    sol.objective = exact_objective(inst, sol.x);
    return sol;
  }

  return solve_impl(inst, kDefaultNodeBudget);
}

bool action_feasible(const ilp::IlpInstance& inst, std::span<const std::uint8_t> bits) {
  inst.validate();
  if (bits.size() != inst.action_coords.size())
    fail(ErrorCode::kDimensionMismatch, "action_feasible: action length mismatch");
  std::vector<signed char> fixed(static_cast<std::size_t>(inst.n), -1);
  for (std::size_t k = 0; k < bits.size(); ++k)
    fixed[static_cast<std::size_t>(inst.action_coords[k])] =
        static_cast<signed char>(bits[k]);
  SearchBudget budget{kDefaultNodeBudget};
  return search(inst, fixed, HUGE_VAL, budget).has_value();
}

}  // namespace lsflow::bnb
