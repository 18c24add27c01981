#include "ltimd/hankel.hpp"

#include <algorithm>
#include <map>

#include "ltimd/exceptions.hpp"

namespace ltimd {

namespace {

MaskedMatrix hankel_of(const IrregularSignal& w, Eigen::Index L,
                       Eigen::Index T_virtual) {
  const Eigen::Index q = w.q();
  const Eigen::Index cols = T_virtual - L + 1;
  MaskedMatrix H;
  H.values = Eigen::MatrixXd::Zero(q * L, cols);
  H.missing = BoolArray::Constant(q * L, cols, false);
  H.depth = L;
  H.vars = q;
  for (Eigen::Index i = 0; i < L; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Eigen::Index t = i + j;
      for (Eigen::Index v = 0; v < q; ++v) {
        if (t >= w.T() || w.is_missing(t, v))
          H.missing(i * q + v, j) = true;
        else
          H.values(i * q + v, j) = w.value(t, v);
      }
    }
  H.row_map.resize(static_cast<std::size_t>(q * L));
  H.col_map.resize(static_cast<std::size_t>(cols));
  for (Eigen::Index r = 0; r < q * L; ++r)
    H.row_map[static_cast<std::size_t>(r)] = r;
  for (Eigen::Index c = 0; c < cols; ++c)
    H.col_map[static_cast<std::size_t>(c)] = c;
  return H;
}

}  // namespace

MaskedMatrix build_hankel(const IrregularSignal& w, int L) {
  if (L < 1 || L > w.T())
    throw DimensionError("Hankel depth must lie in [1, T]");
  return hankel_of(w, L, w.T());
}

MaskedMatrix build_extended_hankel(const IrregularSignal& w) {
  // w extended by T missing samples, at depth T: q*T x (T+1).
  return hankel_of(w, w.T(), 2 * w.T());
}

namespace {

using Pattern = std::vector<Eigen::Index>;  // ascending missing row indices

struct ColumnClass {
  Pattern pattern;
  std::vector<Eigen::Index> cols;
};

SubmatrixCandidate make_candidate(const MaskedMatrix& H,
                                  const Pattern& deleted,
                                  std::vector<Eigen::Index> cols) {
  SubmatrixCandidate cand;
  cand.parent_depth = H.depth;
  cand.deleted_rows = deleted;
  cand.selected_cols = std::move(cols);
  const Eigen::Index kept = H.rows() - static_cast<Eigen::Index>(deleted.size());
  cand.dense.resize(kept, static_cast<Eigen::Index>(cand.selected_cols.size()));
  Eigen::Index out_r = 0;
  std::size_t del_pos = 0;
  for (Eigen::Index r = 0; r < H.rows(); ++r) {
    if (del_pos < deleted.size() && deleted[del_pos] == r) {
      ++del_pos;
      continue;
    }
    for (std::size_t c = 0; c < cand.selected_cols.size(); ++c)
      cand.dense(out_r, static_cast<Eigen::Index>(c)) =
          H.values(r, cand.selected_cols[c]);
    ++out_r;
  }
  return cand;
}

// Descending column count, then ascending first column, then lexicographic
// column lists as a final deterministic tiebreak.
bool candidate_order(const SubmatrixCandidate& a, const SubmatrixCandidate& b) {
  if (a.selected_cols.size() != b.selected_cols.size())
    return a.selected_cols.size() > b.selected_cols.size();
  if (a.selected_cols.front() != b.selected_cols.front())
    return a.selected_cols.front() < b.selected_cols.front();
  return a.selected_cols < b.selected_cols;
}

void enumerate_unions(const MaskedMatrix& H,
                      const std::vector<ColumnClass>& classes, int budget,
                      Eigen::Index min_kept_rows,
                      std::vector<SubmatrixCandidate>& out) {
  const auto n_classes = classes.size();
  Pattern combined;
  std::vector<std::size_t> members;

  // Depth-first union of up to `budget` classes; adding a class only grows
  // the combined pattern, so branches that already delete too much are cut.
  auto recurse = [&](auto&& self, std::size_t first) -> void {
    if (members.size() >= 2) {
      std::vector<Eigen::Index> cols;
      for (const auto idx : members)
        cols.insert(cols.end(), classes[idx].cols.begin(),
                    classes[idx].cols.end());
      std::sort(cols.begin(), cols.end());
      out.push_back(make_candidate(H, combined, std::move(cols)));
    }
    if (members.size() == static_cast<std::size_t>(budget)) return;
    for (std::size_t i = first; i < n_classes; ++i) {
      Pattern next;
      std::set_union(combined.begin(), combined.end(),
                     classes[i].pattern.begin(), classes[i].pattern.end(),
                     std::back_inserter(next));
      if (H.rows() - static_cast<Eigen::Index>(next.size()) < min_kept_rows)
        continue;
      members.push_back(i);
      std::swap(combined, next);
      self(self, i + 1);
      std::swap(combined, next);
      members.pop_back();
    }
  };
  recurse(recurse, 0);
}

}  // namespace

std::vector<SubmatrixCandidate> complete_submatrix_candidates(
    const MaskedMatrix& H, int budget, Eigen::Index min_kept_rows) {
  if (budget < 1) throw DomainError("candidate budget must be positive");
  min_kept_rows = std::max<Eigen::Index>(min_kept_rows, 1);

  std::map<Pattern, std::vector<Eigen::Index>> by_pattern;
  for (Eigen::Index j = 0; j < H.cols(); ++j) {
    Pattern pat;
    for (Eigen::Index r = 0; r < H.rows(); ++r)
      if (H.missing(r, j)) pat.push_back(r);
    by_pattern[std::move(pat)].push_back(j);
  }

  std::vector<ColumnClass> classes;
  std::vector<SubmatrixCandidate> singles;
  for (auto& [pattern, cols] : by_pattern) {
    if (H.rows() - static_cast<Eigen::Index>(pattern.size()) < min_kept_rows)
      continue;
    singles.push_back(make_candidate(H, pattern, cols));
    classes.push_back(ColumnClass{pattern, cols});
  }
  std::sort(singles.begin(), singles.end(), candidate_order);

  std::vector<SubmatrixCandidate> unions;
  if (budget >= 2)
    enumerate_unions(H, classes, budget, min_kept_rows, unions);
  std::sort(unions.begin(), unions.end(), candidate_order);

  std::vector<SubmatrixCandidate> result = std::move(singles);
  result.insert(result.end(), std::make_move_iterator(unions.begin()),
                std::make_move_iterator(unions.end()));
  return result;
}

}  // namespace ltimd
