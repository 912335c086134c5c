#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lsflow/ilp.hpp"

namespace lsflow::bnb {

// Default exploration budget before a resource error. Silent suboptimality
// would break the scale-invariance contract, so the solver never degrades to
// a heuristic answer.
inline constexpr std::uint64_t kDefaultNodeBudget = 1'000'000;

// Globally optimal 0/1 solution of the instance; among optimal solutions
// (objective ties within objective_tol) returns the lexicographically
// smallest full variable vector. Best-first search on the LP bound, branching
// on the most fractional variable, 0-branch preferred; the lexicographic
// completion then fixes variables front to back, keeping a witness solution
// so only positions currently at 1 trigger extra searches.
ilp::IlpSolution solve(const ilp::IlpInstance& inst,
                       std::uint64_t node_budget = kDefaultNodeBudget);

// Exhaustive enumeration with the identical tie-break, n <= 22. The oracle
// that branch and bound must agree with bit for bit.
ilp::IlpSolution brute_force(const ilp::IlpInstance& inst);

// Exact optimum of min costs . a subject to weights . a <= budget.
// Unit weights take the specialized path: select the most negative costs, at
// most floor(budget) of them, none if nonnegative, ties to the lowest index.
// General weights fall back to the full solver.
ilp::BinaryAction solve_budget_subset(std::span<const double> costs,
                                      std::span<const double> weights, double budget);

// Entry point used by the trainer: recognizes budget-plus-fixings instances
// (single all-ones <= row plus unit-row equality fixings) and solves them by
// the subset rule; everything else goes through branch and bound.
ilp::IlpSolution solve_instance(const ilp::IlpInstance& inst);

// Does the instance admit a 0/1 point with the action coordinates pinned to
// `bits`? (Feasibility search over the auxiliary variables.)
bool action_feasible(const ilp::IlpInstance& inst, std::span<const std::uint8_t> bits);

}  // namespace lsflow::bnb
