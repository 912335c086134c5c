#pragma once

#include <span>
#include <vector>

#include "lsflow/ilp.hpp"

namespace lsflow::simplex {

enum class LpStatus { kOptimal, kInfeasible, kUnboundedGuarded };

// LP relaxation solution over the box [0,1]^n (plus fixings).
struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;
  double objective = 0.0;
};

// Bounded-variable two-phase primal simplex for
//   min c.x  s.t.  a_ub x <= b_ub, a_eq x = b_eq, lo <= x <= hi
// where the box is [0,1]^n tightened by `fixed` (-1 free, 0/1 pinned).
// Dantzig pricing with a Bland's-rule fallback under degeneracy, so the
// search cannot cycle. Infeasibility is a status, not a failure: branch
// and bound uses it as a pruning signal.
LpSolution solve_lp(const ilp::IlpInstance& inst, std::span<const signed char> fixed);

LpSolution solve_lp(const ilp::IlpInstance& inst);

}  // namespace lsflow::simplex
