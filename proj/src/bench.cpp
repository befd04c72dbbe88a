#include "sovi/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "sovi/linalg.hpp"
#include "sovi/solvers.hpp"

namespace sovi {
namespace {

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string fmt10(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// errors[a][n - 1] = error of algorithm a at iteration n for one run.
using RunErrors = std::vector<std::vector<double>>;

RunErrors run_one(const ExperimentSpec& spec, const Instance& inst, std::size_t run) {
  Reference ref;
  try {
    ref.value = optimal_value(inst.mdp);
  } catch (const std::exception& e) {
    throw ExperimentError("run " + std::to_string(run) + ", reference solve: " + e.what());
  }

  SolverConfig cfg;
  cfg.max_iters = spec.iters;
  cfg.tolerance = 0.0;

  RunErrors out;
  out.reserve(spec.algorithms.size());
  for (const auto& algo : spec.algorithms) {
    RunTrace trace;
    try {
      switch (algo.kind) {
        case AlgorithmKind::VI:
          trace = value_iteration(inst.mdp, value_from_q(inst.q0), cfg, ref);
          break;
        case AlgorithmKind::QVI:
          trace = q_value_iteration(inst.mdp, inst.q0, cfg, ref);
          break;
        case AlgorithmKind::SOVI: {
          SolverConfig scfg = cfg;
          scfg.smoothing = SmoothingParam(*algo.smoothing_n);
          trace = second_order_value_iteration(inst.mdp, inst.q0, scfg, ref);
          break;
        }
      }
    } catch (const SolverError& e) {
      throw ExperimentError("run " + std::to_string(run) + ", algorithm " + algo.name +
                            ", iteration " + std::to_string(e.iteration()) + ": " + e.what());
    } catch (const std::exception& e) {
      throw ExperimentError("run " + std::to_string(run) + ", algorithm " + algo.name + ": " +
                            e.what());
    }
    std::vector<double> errs;
    errs.reserve(trace.iterates.size());
    for (const auto& rec : trace.iterates) errs.push_back(*rec.error);
    out.push_back(std::move(errs));
  }
  return out;
}

}  // namespace

AlgorithmSpec AlgorithmSpec::vi() { return {"vi", AlgorithmKind::VI, std::nullopt}; }
AlgorithmSpec AlgorithmSpec::qvi() { return {"qvi", AlgorithmKind::QVI, std::nullopt}; }
AlgorithmSpec AlgorithmSpec::sovi(double n) {
  return {"sovi_N" + shortest(n), AlgorithmKind::SOVI, n};
}

std::string_view kind_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::VI:
      return "VI";
    case AlgorithmKind::QVI:
      return "QVI";
    case AlgorithmKind::SOVI:
      return "SOVI";
  }
  return "?";
}

void ExperimentSpec::validate() const {
  if (runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (iters < 1) throw std::invalid_argument("iters must be at least 1");
  if (algorithms.empty()) throw std::invalid_argument("no algorithms selected");
  generator.validate();
  for (const auto& a : algorithms) {
    if (a.kind == AlgorithmKind::SOVI) {
      if (!a.smoothing_n) throw std::invalid_argument(a.name + ": SOVI requires N");
      SmoothingParam check(*a.smoothing_n);
    }
  }
  for (std::size_t x = 0; x < algorithms.size(); ++x) {
    for (std::size_t y = x + 1; y < algorithms.size(); ++y) {
      if (algorithms[x].name == algorithms[y].name) {
        throw std::invalid_argument("duplicate algorithm " + algorithms[x].name);
      }
    }
  }
}

Instance default_instance(const ExperimentSpec& spec, std::size_t run) {
  GeneratorConfig g = spec.generator;
  g.seed = spec.base_seed + run;
  return {random_mdp(g), random_q0(g.num_states, g.num_actions, g.seed)};
}

double average_error(const std::vector<ValueFn>& values, const std::vector<ValueFn>& references) {
  if (values.size() != references.size()) {
    throw std::invalid_argument("average_error: " + std::to_string(values.size()) +
                                " value functions but " + std::to_string(references.size()) +
                                " references");
  }
  if (values.empty()) throw std::invalid_argument("average_error: no runs");
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) sum += max_norm_diff(references[k], values[k]);
  return sum / static_cast<double>(values.size());
}

double standard_error(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) return 0.0;
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  return run_experiment(spec, [&spec](std::size_t run) { return default_instance(spec, run); });
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const InstanceSource& source) {
  spec.validate();
  std::vector<RunErrors> per_run(spec.runs);

  std::size_t workers = spec.threads != 0 ? spec.threads : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, spec.runs);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::size_t failed_run = spec.runs;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t k = next++; k < spec.runs; k = next++) {
      try {
        per_run[k] = run_one(spec, source(k), k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        // Report the lowest failing run so the message is reproducible.
        if (k < failed_run) {
          failed_run = k;
          failure = std::current_exception();
        }
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result{spec, {}};
  const double runs = static_cast<double>(spec.runs);
  for (std::size_t a = 0; a < spec.algorithms.size(); ++a) {
    AlgorithmResult ar{spec.algorithms[a], {}, {}, 0.0, 0.0};
    ar.curve.mean.resize(spec.iters);
    ar.curve.stderr_.resize(spec.iters);
    std::vector<double> column(spec.runs);
    for (std::size_t n = 0; n < spec.iters; ++n) {
      for (std::size_t k = 0; k < spec.runs; ++k) column[k] = per_run[k][a][n];
      ar.curve.mean[n] = std::accumulate(column.begin(), column.end(), 0.0) / runs;
      ar.curve.stderr_[n] = standard_error(column);
    }
    ar.final_errors = column;
    ar.final_mean_error = ar.curve.mean.back();
    ar.final_stderr = ar.curve.stderr_.back();
    result.results.push_back(std::move(ar));
  }
  return result;
}

void write_curve_csv(const ExperimentResult& result, std::ostream& out) {
  std::vector<const AlgorithmResult*> order;
  for (const auto& r : result.results) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const AlgorithmResult* x, const AlgorithmResult* y) {
    return x->algorithm.name < y->algorithm.name;
  });
  out << "algorithm,iteration,mean_error,stderr\n";
  for (const auto* r : order) {
    for (std::size_t n = 0; n < r->curve.mean.size(); ++n) {
      out << r->algorithm.name << ',' << (n + 1) << ',' << fmt10(r->curve.mean[n]) << ','
          << fmt10(r->curve.stderr_[n]) << '\n';
    }
  }
}

std::string curve_csv(const ExperimentResult& result) {
  std::ostringstream os;
  write_curve_csv(result, os);
  return os.str();
}

std::string summary_json(const ExperimentResult& result) {
  using nlohmann::ordered_json;
  const ExperimentSpec& spec = result.spec;
  ordered_json algos = ordered_json::array();
  for (const auto& a : spec.algorithms) {
    ordered_json entry;
    entry["name"] = a.name;
    entry["kind"] = kind_name(a.kind);
    entry["N"] = a.smoothing_n ? ordered_json(*a.smoothing_n) : ordered_json(nullptr);
    algos.push_back(std::move(entry));
  }
  ordered_json doc;
  doc["spec"] = {
      {"runs", spec.runs},
      {"iters", spec.iters},
      {"num_states", spec.generator.num_states},
      {"num_actions", spec.generator.num_actions},
      {"gamma", spec.generator.gamma},
      {"reward_low", spec.generator.reward_low},
      {"reward_high", spec.generator.reward_high},
      {"base_seed", spec.base_seed},
      {"algorithms", std::move(algos)},
  };
  doc["rng"] = kRngName;
  doc["initial_q"] = "uniform integers in [10, 20]";
  doc["reference"] = "greedy policy of Q-value iteration converged to residual 1e-12, evaluated exactly";
  doc["stderr_definition"] =
      "standard error of the mean over runs: sample standard deviation (n - 1) / sqrt(runs)";
  ordered_json results = ordered_json::array();
  for (const auto& r : result.results) {
    ordered_json entry;
    entry["algorithm"] = r.algorithm.name;
    entry["N"] = r.algorithm.smoothing_n ? ordered_json(*r.algorithm.smoothing_n)
                                         : ordered_json(nullptr);
    entry["final_mean_error"] = r.final_mean_error;
    entry["final_stderr"] = r.final_stderr;
    results.push_back(std::move(entry));
  }
  doc["results"] = std::move(results);
  return doc.dump(2);
}

}  // namespace sovi
