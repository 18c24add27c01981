#include "ltimd/rng.hpp"

#include <cmath>

namespace ltimd {

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Eigen::VectorXd Rng::uniform_vector(Eigen::Index size, double lo, double hi) {
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = uniform(lo, hi);
  return v;
}

Eigen::MatrixXd Rng::uniform_matrix(Eigen::Index rows, Eigen::Index cols,
                                    double lo, double hi) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
  return m;
}

Eigen::VectorXd Rng::gaussian_vector(Eigen::Index size) {
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = gaussian();
  return v;
}

Eigen::MatrixXd Rng::orthogonal(Eigen::Index size) {
  if (size == 0) return Eigen::MatrixXd(0, 0);
  Eigen::MatrixXd G(size, size);
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = 0; j < size; ++j) G(i, j) = gaussian();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(G);
  Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < size; ++j)
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  return Q;
}

std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> labels) {
  Rng mix(seed);
  std::uint64_t out = mix.next_u64();
  for (const std::uint64_t label : labels) {
    Rng step(out ^ (label + 0x9e3779b97f4a7c15ull));
    out = step.next_u64();
  }
  return out;
}

}  // namespace ltimd
