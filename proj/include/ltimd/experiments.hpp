#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ltimd/completion.hpp"
#include "ltimd/lti.hpp"
#include "ltimd/parallel.hpp"
#include "ltimd/signals.hpp"

namespace ltimd {

// Recovery-rate sweep over record length and given-data fraction.
struct SweepConfig {
  int n_systems = 100;
  int n_trials = 100;
  std::vector<int> T_grid = {20, 40, 60, 80, 100, 120, 140, 160, 180, 200};
  std::vector<double> given_fraction_grid = {0.1, 0.2, 0.3, 0.4, 0.5,
                                             0.6, 0.7, 0.8, 0.9, 1.0};
  Complexity cx{0, 1, 2, 2};
  std::uint64_t seed = 1;
  int d_max = 24;  // depth cap for the kernel search
  int budget = 3;
  ToleranceConfig tol;
  Exec exec = Exec::Parallel;
};

// Rectangular table of named real columns plus reproducibility metadata.
struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::uint64_t seed = 0;
  std::string config_json;  // serialized configuration

  void add_row(std::initializer_list<double> values);
};

// Writes name.csv plus a name.meta.json sidecar (config, seed, columns).
void write_result_table(const ResultTable& table, const std::string& dir);

// Success rate of the exact kernel search per (T, fraction) cell, each
// success cross-validated against the oracle kernel of the unmasked data.
// Columns: T, given_fraction, success_rate, validated_rate, seconds.
ResultTable run_fig1_sweep(const SweepConfig& cfg);

// Exact completion vs nuclear-norm completion of a slightly damped 6th-order
// autonomous benchmark with a fixed mixed-periodic mask (the nuclear-norm
// solver runs for T <= 200). Columns: T, missing, d_used, err_exact,
// sec_exact, err_nn, sec_nn, nn_iters, nn_converged.
ResultTable run_completion_benchmark(const std::vector<int>& T_list,
                                     std::uint64_t seed);

// The fixed benchmark ingredients, exposed for tests.
StateSpaceModel completion_benchmark_model();
std::vector<Eigen::Index> completion_benchmark_mask(Eigen::Index T);

// Noisy completion case study on a sampled two-compartment model driven by
// bolus inputs, with 40% of the outputs missing and output noise scaled by
// gamma. Columns: gamma, err_ss, err_nn, d_ss, nn_iters.
ResultTable run_noisy_case_study(const std::vector<double>& gammas,
                                 std::uint64_t seed);

// The case-study ingredients, exposed for tests.
StateSpaceModel case_study_model();
Eigen::MatrixXd case_study_input(Eigen::Index T);

}  // namespace ltimd
