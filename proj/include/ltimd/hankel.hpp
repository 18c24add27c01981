#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ltimd/signals.hpp"

namespace ltimd {

// A real matrix with a missing-entry mask and provenance maps back into the
// matrix it was cut from. For freshly built Hankel matrices the maps are the
// identity; row r corresponds to (time offset r / q, variable r % q) and
// column j to the window starting at time j.
struct MaskedMatrix {
  Eigen::MatrixXd values;  // zeros at missing slots
  BoolArray missing;
  std::vector<Eigen::Index> row_map;
  std::vector<Eigen::Index> col_map;
  Eigen::Index depth = 0;  // Hankel depth L
  Eigen::Index vars = 0;   // q

  Eigen::Index rows() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

// Depth-L Hankel matrix of w: qL x (T-L+1), entry ((i*q+v), j) = w_v(i+j).
// Requires 1 <= L <= T, else DimensionError.
MaskedMatrix build_hankel(const IrregularSignal& w, int L);

// Depth-T Hankel matrix of w extended by T missing samples: qT x (T+1).
MaskedMatrix build_extended_hankel(const IrregularSignal& w);

// A complete submatrix of a masked Hankel matrix: a column selection plus the
// rows deleted to clear every missing entry of those columns.
struct SubmatrixCandidate {
  Eigen::Index parent_depth = 0;
  std::vector<Eigen::Index> selected_cols;  // ascending parent column indices
  std::vector<Eigen::Index> deleted_rows;   // ascending parent row indices
  Eigen::MatrixXd dense;                    // kept rows x selected cols
};

// Enumerates complete submatrices of H:
//  (a) column classes grouped by identical missing-row pattern, then
//  (b) unions of 2..budget classes, deleting the combined missing-row set;
// each group ordered by descending column count, then ascending first column.
// Candidates keeping fewer than min_kept_rows rows are dropped (so are empty
// ones). The enumeration is deterministic.
std::vector<SubmatrixCandidate> complete_submatrix_candidates(
    const MaskedMatrix& H, int budget, Eigen::Index min_kept_rows = 1);

}  // namespace ltimd
