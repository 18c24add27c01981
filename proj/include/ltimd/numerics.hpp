#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ltimd {

// Tolerances shared by every rank/residual/subspace decision.
struct ToleranceConfig {
  double rank_rel_tol = 1e-9;
  double residual_tol = 1e-8;
  double angle_tol = 1e-8;
};

// Number of singular values above rank_rel_tol * sigma_max * max(rows, cols).
// Zero or empty matrices have rank 0. Non-finite entries raise MaskError.
int numerical_rank(const Eigen::MatrixXd& M, const ToleranceConfig& tol = {});

// Orthonormal-row basis Z of the left null space: Z * M = 0,
// rows(Z) = rows(M) - numerical_rank(M). May have zero rows.
Eigen::MatrixXd left_nullspace_basis(const Eigen::MatrixXd& M,
                                     const ToleranceConfig& tol = {});

// Orthonormal-column basis N of the (right) null space: M * N = 0.
Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& M,
                                const ToleranceConfig& tol = {});

// Best rank-<=r approximation (truncated SVD). r outside [0, min(rows, cols)]
// raises DimensionError.
Eigen::MatrixXd truncated_svd(const Eigen::MatrixXd& M, int r);

// Indices of k linearly independent rows of Z, greedily chosen by
// column-pivoted orthogonal factorization of Z^T (largest pivot first).
// Raises RankError when numerical_rank(Z) < k.
std::vector<Eigen::Index> select_independent_rows(
    const Eigen::MatrixXd& Z, int k, const ToleranceConfig& tol = {});

// Principal angles between the column spaces of A and B (equal row counts,
// full column rank), non-increasing, in [0, pi/2]. Small angles are computed
// through the sine-based formulation so that identical subspaces report
// angles at round-off level rather than sqrt(eps).
std::vector<double> principal_angles(const Eigen::MatrixXd& A,
                                     const Eigen::MatrixXd& B);

// Largest principal angle; 0 for two empty bases, pi/2 when exactly one
// basis is empty.
double max_principal_angle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

// Largest principal angle between the row spaces of A and B.
double max_row_space_angle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

}  // namespace ltimd
