#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ltimd/behavior.hpp"
#include "ltimd/kernel_ident.hpp"
#include "ltimd/signals.hpp"

namespace ltimd {

enum class CompletionMethod { Exact, NuclearNorm };

struct CompletionResult {
  IrregularSignal completed;  // given entries preserved, missing filled
  CompletionMethod method = CompletionMethod::Exact;

  // Exact method
  bool unique = false;          // rank(P_given) == m*T + n
  bool kernel_exact = true;     // inherited from the kernel used
  double residual_given = 0.0;  // ||P_g beta - w_g|| / max(1, ||w_g||)
  Eigen::VectorXd beta;

  // Nuclear-norm method
  bool converged = true;
  int iterations = 0;
  std::vector<double> objective;  // nuclear norm of the feasible iterate, per iteration
  // Displacement of the splitting's fixed-point variable per iteration.
  // The update map is firmly nonexpansive, so this trace never increases;
  // it is the quantity the stopping rule drives to zero.
  std::vector<double> fp_residual;
};

// Behavior-based completion: builds Gamma at horizon T from the kernel,
// takes the behavior basis P, fits P(given rows) beta = w(given) by least
// squares and fills the missing entries from P beta. kernel.d > T raises
// DimensionError. The fill is unique iff P(given rows) has full column rank.
CompletionResult complete_exact(const IrregularSignal& w,
                                const KernelRep& kernel,
                                const ToleranceConfig& tol = {});

struct SvtConfig {
  double step = 1.0;    // singular-value shrinkage threshold
  double tol = 1e-8;    // relative iterate-change stopping criterion
  int max_iters = 5000;
};

// Nuclear-norm completion: minimizes ||H||_* over depth-L Hankel matrices
// that agree with the given entries, via singular-value-thresholding
// splitting (shrinkage alternated with projection onto the affine set by
// anti-diagonal averaging of the free entries). L < 0 selects the default
// floor((T+1)/2). Returns the best iterate with converged = false when the
// iteration budget runs out.
CompletionResult complete_nuclear_norm(const IrregularSignal& w, int L = -1,
                                       const SvtConfig& cfg = {});

}  // namespace ltimd
