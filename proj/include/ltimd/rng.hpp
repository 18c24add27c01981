#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace ltimd {

// Small deterministic PRNG (splitmix64 core) so that seeded results are
// reproducible across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return next_u64() % bound; }

  // Standard normal via Box-Muller.
  double gaussian();

  Eigen::VectorXd uniform_vector(Eigen::Index size, double lo, double hi);
  Eigen::MatrixXd uniform_matrix(Eigen::Index rows, Eigen::Index cols,
                                 double lo, double hi);
  Eigen::VectorXd gaussian_vector(Eigen::Index size);
  // Random orthogonal matrix (QR of a Gaussian matrix, signs fixed).
  Eigen::MatrixXd orthogonal(Eigen::Index size);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Deterministically mixes stream labels into a seed, for derived per-trial
// generators.
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> labels);

}  // namespace ltimd
