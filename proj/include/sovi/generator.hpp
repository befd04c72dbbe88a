#pragma once

// Seeded random MDPs and initial Q-tables. Output depends only on the
// configuration and seed: the engine is std::mt19937_64 (fully specified by
// the standard) and the uniform mappings below are hand-written rather than
// taken from <random>'s implementation-defined distributions.

#include <cstdint>
#include <string_view>

#include "sovi/mdp.hpp"

namespace sovi {

inline constexpr std::string_view kRngName = "mt19937_64";

struct GeneratorConfig {
  std::size_t num_states = 10;
  std::size_t num_actions = 5;
  double gamma = 0.9;
  std::uint64_t seed = 0;
  double reward_low = -1.0;
  double reward_high = 1.0;

  void validate() const;
};

/// Each transition row: |S| uniforms on (0, 1] normalized to sum 1. Rewards
/// r(i,a,j) uniform on [reward_low, reward_high).
Mdp random_mdp(const GeneratorConfig& cfg);

/// Independent uniform integers in {10, ..., 20}.
QTable random_q0(std::size_t num_states, std::size_t num_actions, std::uint64_t seed);

/// Uniform entries on [low, high]; used for property tests and start sweeps.
QTable random_q(std::size_t num_states, std::size_t num_actions, double low, double high,
                std::uint64_t seed);

}  // namespace sovi
