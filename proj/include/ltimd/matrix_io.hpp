#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

#include "ltimd/kernel_ident.hpp"
#include "ltimd/lti.hpp"

namespace ltimd {

// Kernel and basis files are plain CSV matrices preceded by one comment line
//   # d=<depth>, m=.., p=.., n=.., ell=.., exact=true|false
// For a behavior basis, d records the horizon the basis was built for.

void write_kernel_csv(const KernelRep& kernel, std::ostream& out);
void write_kernel_csv_file(const KernelRep& kernel, const std::string& path);
KernelRep read_kernel_csv(std::istream& in);
KernelRep read_kernel_csv_file(const std::string& path);

void write_basis_csv(const Eigen::MatrixXd& P, int L, const Complexity& cx,
                     bool exact, std::ostream& out);
void write_basis_csv_file(const Eigen::MatrixXd& P, int L,
                          const Complexity& cx, bool exact,
                          const std::string& path);

// Model files carry the (n+p) x (n+m) block matrix [A B; C D] after a
//   # n=.., m=.., p=..
// comment line.
void write_model_csv(const StateSpaceModel& model, std::ostream& out);
void write_model_csv_file(const StateSpaceModel& model,
                          const std::string& path);
StateSpaceModel read_model_csv(std::istream& in);
StateSpaceModel read_model_csv_file(const std::string& path);

// Bare numeric CSV (no header), e.g. initial states or plain matrices.
Eigen::MatrixXd read_matrix_csv(std::istream& in);
Eigen::MatrixXd read_matrix_csv_file(const std::string& path);
void write_matrix_csv(const Eigen::MatrixXd& M, std::ostream& out);

}  // namespace ltimd
