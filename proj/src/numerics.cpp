#include "ltimd/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "ltimd/exceptions.hpp"

namespace ltimd {

namespace {

double rank_threshold(const Eigen::VectorXd& sv, Eigen::Index rows,
                      Eigen::Index cols, const ToleranceConfig& tol) {
  const double smax = sv.size() > 0 ? sv[0] : 0.0;
  return tol.rank_rel_tol * smax * static_cast<double>(std::max(rows, cols));
}

int rank_from_singular_values(const Eigen::VectorXd& sv, Eigen::Index rows,
                              Eigen::Index cols, const ToleranceConfig& tol) {
  const double thresh = rank_threshold(sv, rows, cols, tol);
  int r = 0;
  while (r < sv.size() && sv[r] > thresh) ++r;
  return r;
}

void require_finite(const Eigen::MatrixXd& M) {
  if (!M.allFinite())
    throw MaskError("matrix contains non-finite entries");
}

}  // namespace

int numerical_rank(const Eigen::MatrixXd& M, const ToleranceConfig& tol) {
  if (M.size() == 0) return 0;
  require_finite(M);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
  return rank_from_singular_values(svd.singularValues(), M.rows(), M.cols(),
                                   tol);
}

Eigen::MatrixXd left_nullspace_basis(const Eigen::MatrixXd& M,
                                     const ToleranceConfig& tol) {
  if (M.rows() == 0) return Eigen::MatrixXd(0, 0);
  if (M.cols() == 0 || M.isZero(0.0))
    return Eigen::MatrixXd::Identity(M.rows(), M.rows());
  require_finite(M);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU);
  const int r = rank_from_singular_values(svd.singularValues(), M.rows(),
                                          M.cols(), tol);
  return svd.matrixU().rightCols(M.rows() - r).transpose();
}

Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& M,
                                const ToleranceConfig& tol) {
  if (M.cols() == 0) return Eigen::MatrixXd(0, 0);
  if (M.rows() == 0 || M.isZero(0.0))
    return Eigen::MatrixXd::Identity(M.cols(), M.cols());
  require_finite(M);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const int r = rank_from_singular_values(svd.singularValues(), M.rows(),
                                          M.cols(), tol);
  return svd.matrixV().rightCols(M.cols() - r);
}

Eigen::MatrixXd truncated_svd(const Eigen::MatrixXd& M, int r) {
  const Eigen::Index rmax = std::min(M.rows(), M.cols());
  if (r < 0 || r > rmax)
    throw DimensionError("truncation rank out of range");
  if (r == 0) return Eigen::MatrixXd::Zero(M.rows(), M.cols());
  require_finite(M);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(M,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU().leftCols(r) *
         svd.singularValues().head(r).asDiagonal() *
         svd.matrixV().leftCols(r).transpose();
}

std::vector<Eigen::Index> select_independent_rows(const Eigen::MatrixXd& Z,
                                                  int k,
                                                  const ToleranceConfig& tol) {
  if (k < 0) throw DomainError("row count must be non-negative");
  if (k == 0) return {};
  if (numerical_rank(Z, tol) < k)
    throw RankError("matrix rank is below the requested row count");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Z.transpose());
  const auto& perm = qr.colsPermutation().indices();
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) rows[static_cast<std::size_t>(i)] = perm[i];
  return rows;
}

std::vector<double> principal_angles(const Eigen::MatrixXd& A,
                                     const Eigen::MatrixXd& B) {
  if (A.rows() != B.rows())
    throw DimensionError("principal angles need equal ambient dimensions");
  const Eigen::Index k = std::min(A.cols(), B.cols());
  if (k == 0) return {};
  require_finite(A);
  require_finite(B);

  const Eigen::Index N = A.rows();
  const Eigen::MatrixXd Qa =
      A.householderQr().householderQ() * Eigen::MatrixXd::Identity(N, A.cols());
  const Eigen::MatrixXd Qb =
      B.householderQr().householderQ() * Eigen::MatrixXd::Identity(N, B.cols());

  // Cosines from Qa' Qb; sines from the residual Qb - Qa (Qa' Qb), which
  // stays accurate for small angles.
  const Eigen::MatrixXd M = Qa.transpose() * Qb;
  Eigen::BDCSVD<Eigen::MatrixXd> svd_cos(M);
  Eigen::VectorXd cosines = svd_cos.singularValues();  // non-increasing

  Eigen::BDCSVD<Eigen::MatrixXd> svd_sin(Qb - Qa * M);
  Eigen::VectorXd sines = svd_sin.singularValues();
  std::sort(sines.data(), sines.data() + sines.size());  // non-decreasing

  std::vector<double> angles(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    const double c = std::clamp(cosines[i], -1.0, 1.0);
    const double s = std::clamp(sines[i], 0.0, 1.0);
    angles[static_cast<std::size_t>(i)] =
        (c * c >= 0.5) ? std::asin(s) : std::acos(c);
  }
  std::sort(angles.rbegin(), angles.rend());
  return angles;
}

double max_principal_angle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  if (A.cols() == 0 && B.cols() == 0) return 0.0;
  if (A.cols() == 0 || B.cols() == 0) return M_PI / 2;
  return principal_angles(A, B).front();
}

double max_row_space_angle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  return max_principal_angle(A.transpose(), B.transpose());
}

}  // namespace ltimd
