#pragma once

// Error-vs-iteration experiment: many seeded random MDPs, each solved by a
// list of algorithms for a fixed iteration budget, errors measured against the
// certified optimal value function and averaged per iteration.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sovi/generator.hpp"
#include "sovi/mdp.hpp"

namespace sovi {

enum class AlgorithmKind { VI, QVI, SOVI };

struct AlgorithmSpec {
  std::string name;
  AlgorithmKind kind;
  std::optional<double> smoothing_n;  // SOVI only

  static AlgorithmSpec vi();
  static AlgorithmSpec qvi();
  /// Named "sovi_N<N>" with N in shortest form, e.g. sovi_N35, sovi_N2.5.
  static AlgorithmSpec sovi(double n);
};

std::string_view kind_name(AlgorithmKind kind);

struct ExperimentSpec {
  std::size_t runs = 100;
  /// Shape, discount and reward range. The seed field is ignored: run k draws
  /// its MDP and initial Q-table from base_seed + k.
  GeneratorConfig generator;
  std::size_t iters = 50;
  std::vector<AlgorithmSpec> algorithms;
  std::uint64_t base_seed = 0;
  /// Worker threads; 0 picks the hardware concurrency. Output does not depend
  /// on this.
  std::size_t threads = 0;

  void validate() const;
};

/// One benchmark instance: the MDP and the shared initial Q-table.
struct Instance {
  Mdp mdp;
  QTable q0;
};

/// Instance for run k under the default protocol.
Instance default_instance(const ExperimentSpec& spec, std::size_t run);

using InstanceSource = std::function<Instance(std::size_t run)>;

struct ErrorCurve {
  std::vector<double> mean;     // E(1..iters)
  std::vector<double> stderr_;  // standard error of the mean across runs
};

struct AlgorithmResult {
  AlgorithmSpec algorithm;
  ErrorCurve curve;
  std::vector<double> final_errors;  // per run, ordered by run index
  double final_mean_error = 0.0;
  double final_stderr = 0.0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<AlgorithmResult> results;  // in spec.algorithms order
};

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mean over runs of ||V*_k - V_k||_inf.
double average_error(const std::vector<ValueFn>& values, const std::vector<ValueFn>& references);

/// Sample standard deviation / sqrt(n); 0 for a single sample.
double standard_error(const std::vector<double>& samples);

ExperimentResult run_experiment(const ExperimentSpec& spec);
ExperimentResult run_experiment(const ExperimentSpec& spec, const InstanceSource& source);

/// Header `algorithm,iteration,mean_error,stderr`, rows sorted by
/// (algorithm name, iteration), floats with 10 significant digits.
void write_curve_csv(const ExperimentResult& result, std::ostream& out);
std::string curve_csv(const ExperimentResult& result);

std::string summary_json(const ExperimentResult& result);

}  // namespace sovi
