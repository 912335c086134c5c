#pragma once

#include <memory>

#include "lsflow/env.hpp"

namespace lsflow::env {

std::unique_ptr<Env> make_scheduling_env(const EnvConfig& config);
std::unique_ptr<Env> make_routing_env(const EnvConfig& config);
std::unique_ptr<Env> make_assignment_env(const EnvConfig& config);
std::unique_ptr<Env> make_intervention_env(const EnvConfig& config);
std::unique_ptr<Env> make_sti_env(const EnvConfig& config);

// Stream tags so instance-level structure and episode-level noise never
// collide on the same derived stream.
inline constexpr std::uint64_t kStreamInstance = 0x11;
inline constexpr std::uint64_t kStreamLabels = 0x12;

}  // namespace lsflow::env
