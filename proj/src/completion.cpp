#include "ltimd/completion.hpp"

#include <algorithm>
#include <cmath>

#include "ltimd/exceptions.hpp"
#include "ltimd/numerics.hpp"

namespace ltimd {

CompletionResult complete_exact(const IrregularSignal& w,
                                const KernelRep& kernel,
                                const ToleranceConfig& tol) {
  if (w.q() != kernel.cx.q())
    throw DimensionError("signal width must match the kernel's variable count");
  const auto T = static_cast<int>(w.T());
  if (kernel.d > T)
    throw DimensionError("kernel depth exceeds the record length");
  if (w.all_missing()) throw NoDataError("nothing given to fit");

  const Eigen::MatrixXd P = behavior_basis(build_gamma(kernel, T), tol);
  const auto given = w.given_flat_indices();

  Eigen::MatrixXd Pg(static_cast<Eigen::Index>(given.size()), P.cols());
  Eigen::VectorXd wg(static_cast<Eigen::Index>(given.size()));
  for (std::size_t i = 0; i < given.size(); ++i) {
    const Eigen::Index k = given[i];
    Pg.row(static_cast<Eigen::Index>(i)) = P.row(k);
    wg[static_cast<Eigen::Index>(i)] =
        w.raw_values()(k / w.q(), k % w.q());
  }

  CompletionResult result;
  result.method = CompletionMethod::Exact;
  result.kernel_exact = kernel.exact;
  result.beta = Eigen::BDCSVD<Eigen::MatrixXd>(
                    Pg, Eigen::ComputeThinU | Eigen::ComputeThinV)
                    .solve(wg);
  result.residual_given =
      (Pg * result.beta - wg).norm() / std::max(1.0, wg.norm());
  result.unique = numerical_rank(Pg, tol) == P.cols();
  result.completed = w.filled_with(P * result.beta);
  return result;
}

namespace {

Eigen::MatrixXd hankel_of_stacked(const Eigen::VectorXd& s, Eigen::Index q,
                                  Eigen::Index L, Eigen::Index T) {
  Eigen::MatrixXd H(q * L, T - L + 1);
  for (Eigen::Index i = 0; i < L; ++i)
    for (Eigen::Index j = 0; j <= T - L; ++j)
      H.block(i * q, j, q, 1) = s.segment((i + j) * q, q);
  return H;
}

}  // namespace

CompletionResult complete_nuclear_norm(const IrregularSignal& w, int L,
                                       const SvtConfig& cfg) {
  const Eigen::Index T = w.T();
  const Eigen::Index q = w.q();
  if (L < 0) L = static_cast<int>((T + 1) / 2);
  if (L < 1 || L > T) throw DimensionError("depth must lie in [1, T]");
  if (!(cfg.step > 0.0) || !(cfg.tol > 0.0) || cfg.max_iters < 1)
    throw DomainError("solver configuration out of range");

  CompletionResult result;
  result.method = CompletionMethod::NuclearNorm;
  if (!w.any_missing()) {  // already feasible, nothing free to optimize
    result.completed = w;
    return result;
  }

  const Eigen::Index cols = T - L + 1;
  const auto& mask = w.missing_mask();

  // Occurrence count of each signal entry along its anti-diagonal.
  Eigen::VectorXd mult = Eigen::VectorXd::Zero(T * q);
  for (Eigen::Index t = 0; t < T; ++t) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, t - (T - L));
    const Eigen::Index hi = std::min<Eigen::Index>(L - 1, t);
    for (Eigen::Index v = 0; v < q; ++v)
      mult[t * q + v] = static_cast<double>(hi - lo + 1);
  }

  Eigen::VectorXd s = Eigen::VectorXd::Zero(T * q);
  for (Eigen::Index t = 0; t < T; ++t)
    for (Eigen::Index v = 0; v < q; ++v)
      if (!mask(t, v)) s[t * q + v] = w.raw_values()(t, v);

  Eigen::MatrixXd Z = hankel_of_stacked(s, q, L, T);
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(q * L, cols);
  Eigen::MatrixXd S_prev = Z - U;  // fixed-point variable of the splitting

  result.converged = false;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    // (a) singular-value shrinkage
    Eigen::BDCSVD<Eigen::MatrixXd> svd(
        Z - U, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd sv = svd.singularValues();
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      sv[i] = std::max(sv[i] - cfg.step, 0.0);
    const Eigen::MatrixXd X =
        svd.matrixU() * sv.asDiagonal() * svd.matrixV().transpose();

    // (b) projection onto {Hankel structure, given entries}: anti-diagonal
    // averaging of the free entries
    const Eigen::MatrixXd V = X + U;
    Eigen::VectorXd s_next = Eigen::VectorXd::Zero(T * q);
    for (Eigen::Index i = 0; i < L; ++i)
      for (Eigen::Index j = 0; j < cols; ++j)
        s_next.segment((i + j) * q, q) += V.block(i * q, j, q, 1);
    s_next.array() /= mult.array();
    for (Eigen::Index t = 0; t < T; ++t)
      for (Eigen::Index v = 0; v < q; ++v)
        if (!mask(t, v)) s_next[t * q + v] = w.raw_values()(t, v);

    const Eigen::MatrixXd Z_next = hankel_of_stacked(s_next, q, L, T);
    U += X - Z_next;
    // Track the objective at the feasible iterate (structure and given
    // entries hold exactly there, so no penalty term enters).
    result.objective.push_back(
        Eigen::BDCSVD<Eigen::MatrixXd>(Z_next).singularValues().sum());
    const Eigen::MatrixXd S_cur = Z_next - U;
    result.fp_residual.push_back((S_cur - S_prev).norm());
    S_prev = S_cur;

    const double delta = (s_next - s).norm() / std::max(1.0, s.norm());
    s = s_next;
    Z = Z_next;
    result.iterations = iter + 1;
    if (delta <= cfg.tol) {
      result.converged = true;
      break;
    }
  }

  result.completed = w.filled_with(s);
  return result;
}

}  // namespace ltimd
