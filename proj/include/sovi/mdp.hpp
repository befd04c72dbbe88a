#pragma once

// Finite discounted MDP model and the Q-table / value / policy types shared by
// every solver. State-action pairs are flattened row-major by state:
// flat(i, a) = i * num_actions + a. Transitions and rewards are stored with the
// next-state index innermost, so each (i, a) row is contiguous.

#include <cstddef>
#include <stdexcept>
#include <span>
#include <string>
#include <vector>

namespace sovi {

class Mdp {
 public:
  /// Builds an MDP from flat tensors indexed ((i * A + a) * S + j). Only shape
  /// is checked here; use validate_mdp() for the probability invariants.
  Mdp(std::size_t num_states, std::size_t num_actions, std::vector<double> transitions,
      std::vector<double> rewards, double gamma);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t num_pairs() const { return num_states_ * num_actions_; }
  double gamma() const { return gamma_; }

  double p(std::size_t i, std::size_t a, std::size_t j) const {
    return transitions_[row_offset(i, a) + j];
  }
  double r(std::size_t i, std::size_t a, std::size_t j) const {
    return rewards_[row_offset(i, a) + j];
  }

  /// p(. | i, a) as a contiguous span of length num_states().
  std::span<const double> transition_row(std::size_t i, std::size_t a) const {
    return {transitions_.data() + row_offset(i, a), num_states_};
  }
  std::span<const double> reward_row(std::size_t i, std::size_t a) const {
    return {rewards_.data() + row_offset(i, a), num_states_};
  }

  const std::vector<double>& transitions() const { return transitions_; }
  const std::vector<double>& rewards() const { return rewards_; }

  friend bool operator==(const Mdp&, const Mdp&) = default;

 private:
  std::size_t row_offset(std::size_t i, std::size_t a) const {
    return (i * num_actions_ + a) * num_states_;
  }

  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> transitions_;
  std::vector<double> rewards_;
  double gamma_;
};

/// Q(i, a) stored row-major by state, so flat index i * A + a.
class QTable {
 public:
  QTable(std::size_t num_states, std::size_t num_actions, double fill = 0.0);
  QTable(std::size_t num_states, std::size_t num_actions, std::vector<double> values);

  std::size_t num_states() const { return num_states_; }
  std::size_t num_actions() const { return num_actions_; }
  std::size_t size() const { return values_.size(); }

  double& operator()(std::size_t i, std::size_t a) { return values_[i * num_actions_ + a]; }
  double operator()(std::size_t i, std::size_t a) const { return values_[i * num_actions_ + a]; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * num_actions_, num_actions_};
  }
  std::span<double> row(std::size_t i) { return {values_.data() + i * num_actions_, num_actions_}; }

  std::span<const double> flat() const { return values_; }
  std::span<double> flat() { return values_; }

  bool all_finite() const;

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> values_;
};

struct ValueFn {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  friend bool operator==(const ValueFn&, const ValueFn&) = default;
};

struct Policy {
  std::vector<std::size_t> actions;

  std::size_t size() const { return actions.size(); }
  std::size_t operator[](std::size_t i) const { return actions[i]; }
  friend bool operator==(const Policy&, const Policy&) = default;
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  /// Violations joined with "; ".
  std::string summary() const;
};

inline constexpr double kRowSumTolerance = 1e-9;

ValidationReport validate_mdp(const Mdp& m);

/// r(i, a) = sum_j p(j|i,a) r(i,a,j), laid out like a QTable.
QTable expected_reward(const Mdp& m);

/// V(i) = max_a Q(i, a).
ValueFn value_from_q(const QTable& q);

/// Lowest-index maximizing action per state.
Policy greedy_policy(const QTable& q);

}  // namespace sovi
