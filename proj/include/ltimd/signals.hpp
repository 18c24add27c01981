#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ltimd {

using BoolArray = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Complexity of the model class: m inputs, p outputs, order n, lag ell.
// q = m + p is the number of signal variables.
struct Complexity {
  int m = 0;
  int p = 1;
  int n = 0;
  int ell = 0;

  int q() const { return m + p; }

  // Throws DomainError unless m >= 0, p >= 1, n >= 0, ell >= 0 and
  // ell <= n <= p*ell whenever ell >= 1.
  void validate() const;
};

// A length-T, q-variate discrete-time signal whose entries are either a real
// value or missing. Missing is a tagged state: the value slot of a missing
// entry is never readable. The first `inputs()` variables are inputs, the
// remaining ones outputs.
class IrregularSignal {
 public:
  IrregularSignal() = default;
  IrregularSignal(Eigen::MatrixXd values, BoolArray missing, int inputs = 0);

  // A signal with no missing entries.
  static IrregularSignal complete(Eigen::MatrixXd values, int inputs = 0);

  Eigen::Index T() const { return values_.rows(); }
  Eigen::Index q() const { return values_.cols(); }
  int inputs() const { return inputs_; }
  int outputs() const { return static_cast<int>(q()) - inputs_; }
  void set_inputs(int m);

  bool is_missing(Eigen::Index t, Eigen::Index v) const {
    return missing_(t, v);
  }
  // Throws MaskError when the entry is missing.
  double value(Eigen::Index t, Eigen::Index v) const;

  // Value matrix with zeros at missing slots, and the mask itself.
  const Eigen::MatrixXd& raw_values() const { return values_; }
  const BoolArray& missing_mask() const { return missing_; }

  Eigen::Index missing_count() const { return missing_.count(); }
  bool any_missing() const { return missing_.any(); }
  bool all_missing() const {
    return values_.size() > 0 && missing_.all();
  }

  // Flat entry index of (t, v) in the time-major stacking w(0); w(1); ...
  Eigen::Index flat_index(Eigen::Index t, Eigen::Index v) const {
    return t * q() + v;
  }
  std::vector<Eigen::Index> given_flat_indices() const;
  std::vector<Eigen::Index> missing_flat_indices() const;

  // Time-major stacked vector of a complete signal (MaskError otherwise).
  Eigen::VectorXd stacked() const;

  // First count samples.
  IrregularSignal prefix(Eigen::Index count) const;

  // Copy with the missing entries replaced by the matching entries of
  // `fill` (flat-indexed through the same layout).
  IrregularSignal filled_with(const Eigen::VectorXd& fill_stacked) const;

 private:
  Eigen::MatrixXd values_;  // zeros at missing slots
  BoolArray missing_;
  int inputs_ = 0;
};

// Which entries of a complete signal get masked.
struct MissingPattern {
  enum class Kind { None, Random, PeriodicOutput, Explicit };

  Kind kind = Kind::None;
  // Random: fraction of eligible entries masked (exactly
  // floor(fraction * #eligible) of them), drawn deterministically from seed.
  // With outputs_only set, only output entries are eligible.
  double fraction = 0.0;
  std::uint64_t seed = 0;
  bool outputs_only = false;
  // PeriodicOutput: all outputs masked at t = period-1, 2*period-1, ...
  int period = 0;
  // Explicit: flat entry indices (t*q + v).
  std::vector<Eigen::Index> entries;

  static MissingPattern none();
  static MissingPattern random(double fraction, std::uint64_t seed,
                               bool outputs_only = false);
  static MissingPattern periodic_output(int period);
  static MissingPattern explicit_entries(std::vector<Eigen::Index> entries);
};

// CSV, one sample per row, comma separated, missing entries spelled NaN
// (case sensitive). An optional header row u1,...,um,y1,...,yp names the
// variables and fixes the input count.
IrregularSignal parse_csv(std::istream& in);
IrregularSignal parse_csv_file(const std::string& path);
void write_csv(const IrregularSignal& w, std::ostream& out);
void write_csv_file(const IrregularSignal& w, const std::string& path);

// Masks entries of a complete signal according to the pattern.
IrregularSignal apply_pattern(const IrregularSignal& w,
                              const MissingPattern& pattern);

// Shortest round-trip-exact decimal rendering used by every writer
// (17 significant digits).
std::string format_double(double x);

}  // namespace ltimd
