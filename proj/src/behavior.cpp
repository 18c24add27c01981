#include "ltimd/behavior.hpp"

#include <algorithm>

#include "ltimd/exceptions.hpp"

namespace ltimd {

GammaMatrix build_gamma(const KernelRep& kernel, int L) {
  kernel.cx.validate();
  if (L < kernel.d)
    throw DimensionError("horizon must be at least the kernel depth");
  const int q = kernel.cx.q();
  const int p = kernel.cx.p;
  const int n = kernel.cx.n;
  const int d = kernel.d;
  const Eigen::Index rows0 = kernel.R.rows();  // p*d - n

  GammaMatrix gamma;
  gamma.d = d;
  gamma.L = L;
  gamma.cx = kernel.cx;
  gamma.M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p) * L - n,
                                  static_cast<Eigen::Index>(q) * L);
  gamma.M.topLeftCorner(rows0, kernel.R.cols()) = kernel.R;
  // Shift chain seeded by the first p kernel rows, one block step at a time.
  for (int k = 1; k <= L - d; ++k)
    gamma.M.block(rows0 + static_cast<Eigen::Index>(k - 1) * p,
                  static_cast<Eigen::Index>(k) * q, p, kernel.R.cols()) =
        kernel.R.topRows(p);
  return gamma;
}

Eigen::MatrixXd behavior_basis(const GammaMatrix& gamma,
                               const ToleranceConfig& tol) {
  if (numerical_rank(gamma.M, tol) != gamma.M.rows())
    throw RankError("shift-extended kernel lost row rank (corrupted kernel)");
  return nullspace_basis(gamma.M, tol);
}

MembershipResult membership_test(const Eigen::MatrixXd& P,
                                 const Eigen::VectorXd& wbar,
                                 const ToleranceConfig& tol) {
  if (P.rows() != wbar.size())
    throw DimensionError("window length does not match the basis");
  MembershipResult result;
  result.beta = Eigen::BDCSVD<Eigen::MatrixXd>(
                    P, Eigen::ComputeThinU | Eigen::ComputeThinV)
                    .solve(wbar);
  result.residual =
      (P * result.beta - wbar).norm() / std::max(1.0, wbar.norm());
  result.is_member = result.residual <= tol.residual_tol;
  return result;
}

}  // namespace ltimd
