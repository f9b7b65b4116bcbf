#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

#include "reconn/losses.hpp"
#include "reconn/metrics.hpp"

namespace reconn {

// One training run. Every paper-stated setting is baked into per-experiment
// defaults; any field can be overridden in the config JSON.
struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  std::size_t iterations = 0;
  std::size_t n_interior = 0;
  std::size_t n_interface = 0;
  std::size_t n_boundary = 0;
  std::vector<double> weights;
  std::vector<int> main_sizes;
  std::vector<int> angular_sizes;
  std::string activation = "tanh";
  double delta1 = 0.5;
  double delta2 = 0.9;
  double lr_initial = 1e-3;
  double lr_final = 1e-6;
  int grid_nx = 256;
  int grid_n1d = 10000;
  int threads = 0;  // 0: hardware (capped by RECONN_THREADS)
  std::string output_dir;

  static const std::vector<std::string>& known_experiments();
  static ExperimentConfig defaults_for(const std::string& id);
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Problem / field / loss builders shared by the runner and the tests.
Problem problem_for_experiment(const std::string& id);
std::unique_ptr<Field> field_for_experiment(const ExperimentConfig& cfg);
std::unique_ptr<Loss> loss_for_experiment(const std::string& id);

struct RunResult {
  LossComponents final_loss;
  ErrorReport errors;
  std::vector<double> lambdas;
  std::string output_dir;
};

// Trains per config and writes loss_history.csv, metrics.json, checkpoint
// files, grid dumps (at T/2 and at the end) and singular_report.csv where
// applicable. Aborts with a diagnostic on non-finite loss.
RunResult run_experiment(const ExperimentConfig& cfg);

}  // namespace reconn
