#pragma once

#include <cstdint>
#include <vector>

#include "lsflow/ilp.hpp"
#include "lsflow/rng.hpp"

namespace lsflow::region {

// Target distribution over feasible actions of an instance with pure action
// variables (no auxiliaries).
struct TargetDistribution {
  std::vector<ilp::BinaryAction> actions;
  std::vector<double> probs;
};

struct RegionCheckResult {
  std::vector<ilp::BinaryAction> support;  // feasible actions, enumeration order
  std::vector<double> target;
  std::vector<double> empirical;
  double total_variation = 0.0;
};

// Expressivity check for the solver-induced policy construction: every
// feasible 0/1 point of the (pure-action, n <= 12) instance is certified a
// vertex of the action polytope via an LP separation problem, directions are
// drawn from the mu-mixture of region-restricted laws by rejection from the
// uniform sphere law, each accepted direction is pushed through the full
// branch-and-bound solver, and the empirical action frequencies are returned.
RegionCheckResult region_sample_check(const ilp::IlpInstance& inst,
                                      const TargetDistribution& mu,
                                      std::size_t draws, RngStream& rng);

}  // namespace lsflow::region
