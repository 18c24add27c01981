#include "ltimd/kernel_ident.hpp"

#include <algorithm>
#include <optional>
#include <vector>

#include "ltimd/exceptions.hpp"

namespace ltimd {

namespace {

Eigen::MatrixXd orthonormal_rows(const Eigen::MatrixXd& M) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(M.transpose());
  const Eigen::MatrixXd thinQ =
      qr.householderQ() * Eigen::MatrixXd::Identity(M.cols(), M.rows());
  return thinQ.transpose();
}

// Recombines the kernel basis so that the first p rows are drawn from the
// lowest-degree annihilators the row space contains, right-aligned to full
// width. Those rows seed the shift chains of the horizon extension; seeding
// with anything of higher polynomial degree plants spurious roots in the
// chain, and any such root outside the unit circle collapses the smallest
// singular values of the extension exponentially in the horizon. Returns an
// empty matrix when the row space exposes no such seed (noisy kernels).
Eigen::MatrixXd chain_seeded_basis(const Eigen::MatrixXd& R,
                                   const Complexity& cx,
                                   const ToleranceConfig& tol) {
  const Eigen::Index q = cx.q();
  const Eigen::Index low_width = q * (cx.ell + 1);
  const Eigen::Index tail_cols = R.cols() - low_width;

  // Row-space members supported on the leading low_width columns: the
  // combinations annihilating the trailing column block.
  const Eigen::MatrixXd N =
      tail_cols == 0
          ? Eigen::MatrixXd::Identity(R.rows(), R.rows())
          : left_nullspace_basis(R.rightCols(tail_cols), tol);
  if (N.rows() < cx.p) return {};
  const Eigen::MatrixXd low =
      orthonormal_rows(Eigen::MatrixXd(N * R).leftCols(low_width));

  // The p of them with the best-conditioned trailing q-block.
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> pick(
      low.rightCols(q).transpose());
  Eigen::MatrixXd seeds = Eigen::MatrixXd::Zero(cx.p, R.cols());
  for (int i = 0; i < cx.p; ++i)
    seeds.row(i).tail(low_width) = low.row(pick.colsPermutation().indices()[i]);
  if (numerical_rank(seeds.rightCols(q), tol) < cx.p) return {};

  // Complete with an orthonormal basis of the rest of the row space.
  const Eigen::MatrixXd range = orthonormal_rows(R);
  const Eigen::MatrixXd residue =
      range - (range * seeds.transpose()) * seeds;
  const Eigen::BDCSVD<Eigen::MatrixXd> svd(
      residue, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXd basis(R.rows(), R.cols());
  basis.topRows(cx.p) = seeds;
  basis.bottomRows(R.rows() - cx.p) =
      svd.matrixV().leftCols(R.rows() - cx.p).transpose();
  if (numerical_rank(basis, tol) != R.rows()) return {};
  return basis;
}

}  // namespace

KernelRep make_kernel(Eigen::MatrixXd R, int d, const Complexity& cx,
                      bool exact, const ToleranceConfig& tol) {
  cx.validate();
  const int q = cx.q();
  if (d < cx.ell + 1) throw DomainError("kernel depth must be at least ell+1");
  if (R.cols() != static_cast<Eigen::Index>(q) * d ||
      R.rows() != static_cast<Eigen::Index>(cx.p) * d - cx.n)
    throw DimensionError("kernel must be (p*d - n) x (q*d)");
  if (numerical_rank(R, tol) != R.rows())
    throw RankError("kernel rows are linearly dependent");

  if (R.rows() > cx.p) {
    Eigen::MatrixXd seeded = chain_seeded_basis(R, cx, tol);
    if (seeded.size() > 0) {
      R = std::move(seeded);
    } else {
      // Fallback: permute the rows whose trailing q-block is best
      // conditioned to the front.
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(
          R.rightCols(q).transpose());
      const auto& perm = qr.colsPermutation().indices();
      std::vector<Eigen::Index> order;
      order.reserve(static_cast<std::size_t>(R.rows()));
      for (int i = 0; i < cx.p && i < perm.size(); ++i)
        order.push_back(perm[i]);
      std::sort(order.begin(), order.end());
      for (Eigen::Index r = 0; r < R.rows(); ++r)
        if (std::find(order.begin(), order.end(), r) == order.end())
          order.push_back(r);
      Eigen::MatrixXd reordered(R.rows(), R.cols());
      for (Eigen::Index r = 0; r < R.rows(); ++r)
        reordered.row(r) = R.row(order[static_cast<std::size_t>(r)]);
      R = std::move(reordered);
    }
  }

  KernelRep kernel;
  kernel.R = std::move(R);
  kernel.d = d;
  kernel.cx = cx;
  kernel.exact = exact;
  return kernel;
}

Eigen::MatrixXd extend_kernel_rows(const Eigen::MatrixXd& Zbar,
                                   const std::vector<Eigen::Index>& deleted,
                                   Eigen::Index full_width) {
  if (Zbar.cols() + static_cast<Eigen::Index>(deleted.size()) != full_width)
    throw DimensionError("columns plus deleted positions must fill the width");
  std::vector<bool> is_deleted(static_cast<std::size_t>(full_width), false);
  for (const Eigen::Index pos : deleted) {
    if (pos < 0 || pos >= full_width)
      throw IndexError("deleted position out of range");
    if (is_deleted[static_cast<std::size_t>(pos)])
      throw IndexError("deleted positions collide");
    is_deleted[static_cast<std::size_t>(pos)] = true;
  }
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(Zbar.rows(), full_width);
  Eigen::Index src = 0;
  for (Eigen::Index c = 0; c < full_width; ++c)
    if (!is_deleted[static_cast<std::size_t>(c)]) Z.col(c) = Zbar.col(src++);
  return Z;
}

namespace {

IdentOutcome identify_impl(const IrregularSignal& w, const Complexity& cx,
                           const IdentOptions& opts, bool noisy) {
  cx.validate();
  if (w.T() < 1 || w.all_missing())
    throw NoDataError("the signal carries no samples");
  if (w.q() != cx.q())
    throw DimensionError("signal width must equal m + p");

  const int q = cx.q();
  const Eigen::Index T = w.T();
  const int d_max =
      opts.d_max < 0 ? static_cast<int>(T)
                     : std::min(opts.d_max, static_cast<int>(T));
  if (d_max < cx.ell + 1)
    throw DomainError("maximum depth must be at least ell + 1");

  IdentOutcome outcome;
  Eigen::MatrixXd Z(0, static_cast<Eigen::Index>(q) * (cx.ell + 1));

  for (int d = cx.ell + 1; d <= d_max; ++d) {
    const Eigen::Index width = static_cast<Eigen::Index>(q) * d;
    if (Z.cols() < width) {  // carried annihilators gain trailing zeros
      const Eigen::Index old = Z.cols();
      Z.conservativeResize(Eigen::NoChange, width);
      Z.rightCols(width - old).setZero();
    }

    const int mdn = cx.m * d + cx.n;
    const int target = cx.p * d - cx.n;
    const MaskedMatrix H = build_hankel(w, d);
    const auto candidates =
        complete_submatrix_candidates(H, opts.budget, mdn + 1);

    DepthDiagnostics diag;
    diag.d = d;
    diag.candidates = static_cast<int>(candidates.size());

    int zrank = numerical_rank(Z, opts.tol);
    bool reached = noisy ? zrank >= target : zrank == target;
    const std::ptrdiff_t chunk = std::max(1, 4 * max_threads());

    for (std::size_t base = 0; base < candidates.size() && !reached;
         base += static_cast<std::size_t>(chunk)) {
      const auto count = static_cast<std::ptrdiff_t>(
          std::min(candidates.size() - base, static_cast<std::size_t>(chunk)));
      std::vector<std::optional<Eigen::MatrixXd>> found(
          static_cast<std::size_t>(count));

      for_each_index(opts.exec, count, [&](std::ptrdiff_t i) {
        const auto& cand = candidates[base + static_cast<std::size_t>(i)];
        if (cand.dense.cols() < mdn) return;  // rank mdn is unreachable
        const int r = numerical_rank(cand.dense, opts.tol);
        if (noisy ? r < mdn : r != mdn) return;
        const Eigen::MatrixXd source =
            noisy ? truncated_svd(cand.dense, mdn) : cand.dense;
        const Eigen::MatrixXd Zbar = left_nullspace_basis(source, opts.tol);
        if (Zbar.rows() == 0) return;
        found[static_cast<std::size_t>(i)] =
            extend_kernel_rows(Zbar, cand.deleted_rows, width);
      });

      for (std::ptrdiff_t i = 0; i < count && !reached; ++i) {
        auto& rows = found[static_cast<std::size_t>(i)];
        if (!rows) continue;
        const Eigen::Index at = Z.rows();
        Z.conservativeResize(at + rows->rows(), Eigen::NoChange);
        Z.bottomRows(rows->rows()) = *rows;
        ++diag.used;
        zrank = numerical_rank(Z, opts.tol);
        reached = noisy ? zrank >= target : zrank == target;
      }
    }

    diag.annihilator_rank = zrank;
    outcome.diagnostics.push_back(diag);
    outcome.last_depth = d;

    if (reached) {
      Eigen::MatrixXd pool = Z;
      if (noisy && zrank > target) pool = truncated_svd(Z, target);
      const auto picked = select_independent_rows(pool, target, opts.tol);
      Eigen::MatrixXd R(target, width);
      for (int r = 0; r < target; ++r)
        R.row(r) = pool.row(picked[static_cast<std::size_t>(r)]);
      outcome.status = IdentStatus::Success;
      outcome.kernel = make_kernel(std::move(R), d, cx, !noisy, opts.tol);
      outcome.annihilators = std::move(Z);
      return outcome;
    }
  }

  outcome.status = IdentStatus::Partial;
  outcome.annihilators = std::move(Z);
  return outcome;
}

}  // namespace

IdentOutcome identify_exact(const IrregularSignal& w, const Complexity& cx,
                            const IdentOptions& opts) {
  return identify_impl(w, cx, opts, false);
}

IdentOutcome identify_noisy(const IrregularSignal& w, const Complexity& cx,
                            const IdentOptions& opts) {
  return identify_impl(w, cx, opts, true);
}

}  // namespace ltimd
