#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "ltimd/kernel_ident.hpp"
#include "ltimd/numerics.hpp"
#include "ltimd/signals.hpp"

namespace ltimd {

// x(t+1) = A x(t) + B u(t),  y(t) = C x(t) + D u(t).
struct StateSpaceModel {
  Eigen::MatrixXd A;  // n x n
  Eigen::MatrixXd B;  // n x m
  Eigen::MatrixXd C;  // p x n
  Eigen::MatrixXd D;  // p x m

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  int p() const { return static_cast<int>(C.rows()); }

  // Throws DimensionError on inconsistent blocks.
  void validate() const;
};

// Simulates T = u.rows() steps and returns the complete signal w = (u, y)
// with inputs() = m. For autonomous models pass a T x 0 input.
IrregularSignal simulate(const StateSpaceModel& model,
                         const Eigen::VectorXd& x0, const Eigen::MatrixXd& u);

// Convenience: T-step free response (m must be 0).
IrregularSignal simulate_free(const StateSpaceModel& model,
                              const Eigen::VectorXd& x0, Eigen::Index T);

// Minimal k with rank [C; CA; ...; CA^(k-1)] = n (the lag of (A, C)).
int observability_index(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                        const ToleranceConfig& tol = {});

bool is_controllable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     const ToleranceConfig& tol = {});

// Deterministic random model of the given complexity: observable with lag
// exactly ell, controllable whenever m >= 1, eigenvalue moduli in
// [0.5, 0.99]. Throws DomainError when sampling keeps failing.
StateSpaceModel random_system(const Complexity& cx, std::uint64_t seed);

// Ground-truth kernel representation from a complete trajectory: requires
// rank H_d(w) = m*d + n (else GpeViolation) and returns the orthonormal left
// null space basis as a depth-d kernel. Missing entries raise MaskError.
KernelRep oracle_kernel(const IrregularSignal& w, const Complexity& cx, int d,
                        const ToleranceConfig& tol = {});

// Mosaic persistency-of-excitation test: stacks the input windows
// u_[j(ell+1), j(ell+1)+n+ell+2], j = 0..n_c-1, into an m(n+ell+3) x n_c
// matrix and checks full row rank. n_c < 0 selects the default m(n+ell+3).
// Too-short inputs return false (diagnostic explains); n_c beyond the
// available windows raises DimensionError.
bool check_pe_mosaic(const Eigen::MatrixXd& u, const Complexity& cx,
                     int n_c = -1, const ToleranceConfig& tol = {},
                     std::string* diagnostic = nullptr);

// Sample-observability test for period-(ell+1) output gaps: full column rank
// of [C; CA; ...; CA^(ell-2); CA^(ell+1)] where ell is the lag of (A, C).
// Lag below 2 raises DomainError.
bool check_sample_observability(const StateSpaceModel& model,
                                const ToleranceConfig& tol = {});

}  // namespace ltimd
