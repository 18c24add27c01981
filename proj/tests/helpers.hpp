#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ltimd/lti.hpp"
#include "ltimd/rng.hpp"
#include "ltimd/signals.hpp"

namespace ltimd::testing {

// Length-8 ramp with two interior samples knocked out. Any second-order
// autonomous model class with lag 2 explains it, and the unique affine
// completion restores 1..8.
inline IrregularSignal gapped_ramp() {
  Eigen::MatrixXd values(8, 1);
  values << 1, 2, 0, 4, 5, 0, 7, 8;
  BoolArray missing = BoolArray::Constant(8, 1, false);
  missing(2, 0) = true;
  missing(5, 0) = true;
  return IrregularSignal(std::move(values), std::move(missing), 0);
}

inline Complexity affine_cx() { return Complexity{0, 1, 2, 2}; }

// Row space every depth-4 kernel recovered from the gapped ramp must span:
// both rows annihilate windows of affine sequences.
inline Eigen::MatrixXd affine_kernel_span() {
  Eigen::MatrixXd S(2, 4);
  S << 1.0, -1.5, 0.0, 0.5,
       1.0, 0.0, -3.0, 2.0;
  return S;
}

inline IrregularSignal ramp_signal(Eigen::Index T) {
  Eigen::MatrixXd values(T, 1);
  for (Eigen::Index t = 0; t < T; ++t)
    values(t, 0) = static_cast<double>(t + 1);
  return IrregularSignal::complete(std::move(values), 0);
}

struct Draw {
  StateSpaceModel model;
  IrregularSignal w;  // complete trajectory
};

// Deterministic random model plus one of its trajectories.
inline Draw draw_trajectory(const Complexity& cx, std::uint64_t seed,
                            Eigen::Index T) {
  Draw d;
  d.model = random_system(cx, derive_seed(seed, {101}));
  Rng rng(derive_seed(seed, {102}));
  const Eigen::VectorXd x0 = rng.uniform_vector(cx.n, -1.0, 1.0);
  const Eigen::MatrixXd u = rng.uniform_matrix(T, cx.m, -1.0, 1.0);
  d.w = simulate(d.model, x0, u);
  return d;
}

inline std::vector<Complexity> complexity_presets() {
  return {Complexity{0, 1, 2, 2}, Complexity{1, 1, 2, 2},
          Complexity{1, 2, 3, 2}, Complexity{2, 1, 3, 3},
          Complexity{0, 2, 4, 2}, Complexity{1, 1, 3, 3}};
}

// Per-test scratch directory under the system temp root.
inline std::string temp_dir(const std::string& tag) {
  const auto base =
      std::filesystem::temp_directory_path() / ("ltimd_test_" + tag);
  std::filesystem::create_directories(base);
  return base.string();
}

}  // namespace ltimd::testing
