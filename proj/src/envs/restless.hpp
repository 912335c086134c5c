#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lsflow/rng.hpp"

namespace lsflow::env {

// Two-state restless arms shared by the scheduling, routing and assignment
// families: an entity acted on this step lands in the good state with
// probability p_act; an unacted good entity decays with probability p_pass.
// Per-step reward is the count of good entities after the transition.
struct RestlessArms {
  std::vector<std::uint8_t> state;
  std::vector<double> p_act;
  std::vector<double> p_pass;

  // Per-entity probabilities jittered +-0.1 around the base rates.
  void init(int n, double base_act, double base_pass, RngStream& instance_rng);
  void reset_states(RngStream& episode_rng);
  double step(std::span<const std::uint8_t> acted, RngStream& rng);
};

}  // namespace lsflow::env
