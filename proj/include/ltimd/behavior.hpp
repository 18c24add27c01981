#pragma once

#include <Eigen/Dense>

#include "ltimd/kernel_ident.hpp"
#include "ltimd/numerics.hpp"

namespace ltimd {

// Bank of shifted kernel rows at horizon L: the kernel rows padded to width
// qL, followed by L-d shifted copies of the first p rows. Full row rank
// p*L - n when well formed.
struct GammaMatrix {
  Eigen::MatrixXd M;  // (p*L - n) x (q*L)
  int d = 0;
  int L = 0;
  Complexity cx;
};

// Requires L >= kernel.d (DimensionError).
GammaMatrix build_gamma(const KernelRep& kernel, int L);

// Orthonormal-column basis P of the horizon-L behavior: the null space of
// Gamma, qL x (mL + n). A row-rank-deficient Gamma (corrupted kernel) raises
// RankError.
Eigen::MatrixXd behavior_basis(const GammaMatrix& gamma,
                               const ToleranceConfig& tol = {});

struct MembershipResult {
  bool is_member = false;
  Eigen::VectorXd beta;
  double residual = 0.0;  // ||P beta - w|| / max(1, ||w||)
};

// Least-squares membership of the stacked window wbar in the column space of
// P. Length mismatch raises DimensionError.
MembershipResult membership_test(const Eigen::MatrixXd& P,
                                 const Eigen::VectorXd& wbar,
                                 const ToleranceConfig& tol = {});

}  // namespace ltimd
