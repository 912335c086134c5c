#include "restless.hpp"

#include <algorithm>

namespace lsflow::env {

void RestlessArms::init(int n, double base_act, double base_pass, RngStream& instance_rng) {
  state.assign(static_cast<std::size_t>(n), 0);
  p_act.resize(static_cast<std::size_t>(n));
  p_pass.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    p_act[static_cast<std::size_t>(j)] =
        std::clamp(base_act + instance_rng.uniform(-0.1, 0.1), 0.05, 0.95);
    p_pass[static_cast<std::size_t>(j)] =
        std::clamp(base_pass + instance_rng.uniform(-0.1, 0.1), 0.05, 0.95);
  }
}

void RestlessArms::reset_states(RngStream& episode_rng) {
  for (auto& s : state) s = episode_rng.uniform() < 0.5 ? 1 : 0;
}

double RestlessArms::step(std::span<const std::uint8_t> acted, RngStream& rng) {
  double good = 0.0;
  for (std::size_t j = 0; j < state.size(); ++j) {
    if (acted[j]) {
      state[j] = rng.uniform() < p_act[j] ? 1 : 0;
    } else if (state[j]) {
      if (rng.uniform() < p_pass[j]) state[j] = 0;
    }
    good += state[j];
  }
  return good;
}

}  // namespace lsflow::env
