#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "ltimd/hankel.hpp"
#include "ltimd/numerics.hpp"
#include "ltimd/parallel.hpp"
#include "ltimd/signals.hpp"

namespace ltimd {

// Kernel representation of depth d: R has full row rank p*d - n and width
// q*d; a complete trajectory w of the system satisfies R H_d(w) = 0.
struct KernelRep {
  Eigen::MatrixXd R;
  int d = 0;
  Complexity cx;
  bool exact = true;
};

// Builds a KernelRep after recombining the basis so that the first p rows
// make numerically sound shift-chain seeds: lowest-degree members of the row
// space, right-aligned, with a full-rank trailing q-block. The row space is
// unchanged. Throws RankError when R is row-rank deficient.
KernelRep make_kernel(Eigen::MatrixXd R, int d, const Complexity& cx,
                      bool exact, const ToleranceConfig& tol = {});

enum class IdentStatus { Success, Partial };

struct DepthDiagnostics {
  int d = 0;
  int candidates = 0;       // enumerated at this depth
  int used = 0;             // contributed annihilator rows
  int annihilator_rank = 0; // rank of the accumulated stack after this depth
};

struct IdentOutcome {
  IdentStatus status = IdentStatus::Partial;
  std::optional<KernelRep> kernel;   // set on Success
  Eigen::MatrixXd annihilators;      // accumulated stack (width q*d_last)
  int last_depth = 0;
  std::vector<DepthDiagnostics> diagnostics;
};

struct IdentOptions {
  int d_max = -1;  // < 0 means T
  int budget = 3;  // max classes united into one candidate
  ToleranceConfig tol;
  Exec exec = Exec::Parallel;
};

// Inserts zero columns into Zbar at the (parent-indexed) deleted positions so
// the rows annihilate the full-height matrix. Zbar.cols() + deleted.size()
// must equal full_width (DimensionError); duplicate or out-of-range positions
// raise IndexError.
Eigen::MatrixXd extend_kernel_rows(const Eigen::MatrixXd& Zbar,
                                   const std::vector<Eigen::Index>& deleted,
                                   Eigen::Index full_width);

// Exact-data kernel search: scans depths d = ell+1 .. d_max, harvesting left
// null spaces of complete Hankel submatrices whose rank is exactly m*d + n,
// until the accumulated annihilators reach rank p*d - n. Returns Success with
// a depth-d kernel, or Partial with everything that was found.
// Entirely missing signals raise NoDataError; d_max < ell + 1 DomainError.
IdentOutcome identify_exact(const IrregularSignal& w, const Complexity& cx,
                            const IdentOptions& opts = {});

// Noise-robust variant: candidates are gated by rank >= m*d + n, truncated to
// that rank before the null-space step, the depth exit accepts rank >= p*d-n,
// and an overshooting stack is truncated back to rank p*d - n. The returned
// kernel is flagged exact = false.
IdentOutcome identify_noisy(const IrregularSignal& w, const Complexity& cx,
                            const IdentOptions& opts = {});

}  // namespace ltimd
