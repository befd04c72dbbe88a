#include "sovi/generator.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace sovi {
namespace {

// Q-tables draw from a stream decorrelated from the MDP stream with the same
// seed, so run k can use seed base + k for both.
constexpr std::uint64_t kQStreamSalt = 0x9E3779B97F4A7C15ULL;

// [0, 1) with 53 random bits.
double unit_closed_open(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

// (0, 1]
double unit_open_closed(std::mt19937_64& eng) {
  return static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;
}

// Uniform on {0, ..., bound - 1} by rejection.
std::uint64_t uniform_below(std::mt19937_64& eng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = eng();
  } while (x >= limit);
  return x % bound;
}

}  // namespace

void GeneratorConfig::validate() const {
  if (num_states == 0 || num_actions == 0) {
    throw std::invalid_argument("generator needs at least one state and one action");
  }
  if (!(gamma >= 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in [0, 1), got " + std::to_string(gamma));
  }
  if (!(reward_low < reward_high) || !std::isfinite(reward_low) || !std::isfinite(reward_high)) {
    throw std::invalid_argument("reward range must be finite with low < high");
  }
}

Mdp random_mdp(const GeneratorConfig& cfg) {
  cfg.validate();
  const std::size_t s = cfg.num_states;
  const std::size_t rows = s * cfg.num_actions;
  std::mt19937_64 eng(cfg.seed);

  std::vector<double> transitions(rows * s);
  for (std::size_t row = 0; row < rows; ++row) {
    double* p = transitions.data() + row * s;
    double sum = 0.0;
    for (std::size_t j = 0; j < s; ++j) {
      p[j] = unit_open_closed(eng);
      sum += p[j];
    }
    for (std::size_t j = 0; j < s; ++j) p[j] /= sum;
  }

  const double width = cfg.reward_high - cfg.reward_low;
  std::vector<double> rewards(rows * s);
  for (double& r : rewards) r = cfg.reward_low + width * unit_closed_open(eng);

  return Mdp(s, cfg.num_actions, std::move(transitions), std::move(rewards), cfg.gamma);
}

QTable random_q0(std::size_t num_states, std::size_t num_actions, std::uint64_t seed) {
  std::mt19937_64 eng(seed ^ kQStreamSalt);
  QTable q(num_states, num_actions);
  for (double& v : q.flat()) v = 10.0 + static_cast<double>(uniform_below(eng, 11));
  return q;
}

QTable random_q(std::size_t num_states, std::size_t num_actions, double low, double high,
                std::uint64_t seed) {
  std::mt19937_64 eng(seed ^ kQStreamSalt);
  QTable q(num_states, num_actions);
  for (double& v : q.flat()) v = low + (high - low) * unit_closed_open(eng);
  return q;
}

}  // namespace sovi
