#include "ltimd/signals.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "ltimd/exceptions.hpp"
#include "ltimd/rng.hpp"

namespace ltimd {

void Complexity::validate() const {
  if (m < 0 || p < 1 || n < 0 || ell < 0)
    throw DomainError("complexity requires m >= 0, p >= 1, n >= 0, ell >= 0");
  if (ell >= 1 && !(ell <= n && n <= p * ell))
    throw DomainError("complexity requires ell <= n <= p*ell");
  if (ell == 0 && n != 0)
    throw DomainError("complexity with ell = 0 requires n = 0");
}

IrregularSignal::IrregularSignal(Eigen::MatrixXd values, BoolArray missing,
                                 int inputs)
    : values_(std::move(values)), missing_(std::move(missing)) {
  if (values_.rows() != missing_.rows() || values_.cols() != missing_.cols())
    throw DimensionError("signal values and mask shapes differ");
  set_inputs(inputs);
  values_ = missing_.select(0.0, values_);  // missing slots hold zeros
}

IrregularSignal IrregularSignal::complete(Eigen::MatrixXd values, int inputs) {
  BoolArray missing = BoolArray::Constant(values.rows(), values.cols(), false);
  return IrregularSignal(std::move(values), std::move(missing), inputs);
}

void IrregularSignal::set_inputs(int m) {
  if (m < 0 || m > q())
    throw DomainError("input count must lie in [0, q]");
  inputs_ = m;
}

double IrregularSignal::value(Eigen::Index t, Eigen::Index v) const {
  if (missing_(t, v)) throw MaskError("entry is missing");
  return values_(t, v);
}

std::vector<Eigen::Index> IrregularSignal::given_flat_indices() const {
  std::vector<Eigen::Index> idx;
  idx.reserve(static_cast<std::size_t>(values_.size() - missing_count()));
  for (Eigen::Index t = 0; t < T(); ++t)
    for (Eigen::Index v = 0; v < q(); ++v)
      if (!missing_(t, v)) idx.push_back(flat_index(t, v));
  return idx;
}

std::vector<Eigen::Index> IrregularSignal::missing_flat_indices() const {
  std::vector<Eigen::Index> idx;
  idx.reserve(static_cast<std::size_t>(missing_count()));
  for (Eigen::Index t = 0; t < T(); ++t)
    for (Eigen::Index v = 0; v < q(); ++v)
      if (missing_(t, v)) idx.push_back(flat_index(t, v));
  return idx;
}

Eigen::VectorXd IrregularSignal::stacked() const {
  if (any_missing()) throw MaskError("stacking requires a complete signal");
  Eigen::VectorXd s(T() * q());
  for (Eigen::Index t = 0; t < T(); ++t)
    for (Eigen::Index v = 0; v < q(); ++v) s[flat_index(t, v)] = values_(t, v);
  return s;
}

IrregularSignal IrregularSignal::prefix(Eigen::Index count) const {
  if (count < 1 || count > T())
    throw DimensionError("prefix length out of range");
  return IrregularSignal(values_.topRows(count), missing_.topRows(count),
                         inputs_);
}

IrregularSignal IrregularSignal::filled_with(
    const Eigen::VectorXd& fill_stacked) const {
  if (fill_stacked.size() != T() * q())
    throw DimensionError("fill vector length does not match the signal");
  Eigen::MatrixXd values = values_;
  for (Eigen::Index t = 0; t < T(); ++t)
    for (Eigen::Index v = 0; v < q(); ++v)
      if (missing_(t, v)) values(t, v) = fill_stacked[flat_index(t, v)];
  return IrregularSignal::complete(std::move(values), inputs_);
}

MissingPattern MissingPattern::none() { return {}; }

MissingPattern MissingPattern::random(double fraction, std::uint64_t seed,
                                      bool outputs_only) {
  MissingPattern p;
  p.kind = Kind::Random;
  p.fraction = fraction;
  p.seed = seed;
  p.outputs_only = outputs_only;
  return p;
}

MissingPattern MissingPattern::periodic_output(int period) {
  MissingPattern p;
  p.kind = Kind::PeriodicOutput;
  p.period = period;
  return p;
}

MissingPattern MissingPattern::explicit_entries(
    std::vector<Eigen::Index> entries) {
  MissingPattern p;
  p.kind = Kind::Explicit;
  p.entries = std::move(entries);
  return p;
}

IrregularSignal apply_pattern(const IrregularSignal& w,
                              const MissingPattern& pattern) {
  if (w.any_missing())
    throw MaskError("patterns apply to complete signals only");
  BoolArray missing = BoolArray::Constant(w.T(), w.q(), false);

  switch (pattern.kind) {
    case MissingPattern::Kind::None:
      break;
    case MissingPattern::Kind::Random: {
      if (!(pattern.fraction > 0.0 && pattern.fraction < 1.0))
        throw DomainError("random pattern fraction must lie in (0, 1)");
      std::vector<Eigen::Index> eligible;
      const Eigen::Index v0 = pattern.outputs_only ? w.inputs() : 0;
      for (Eigen::Index t = 0; t < w.T(); ++t)
        for (Eigen::Index v = v0; v < w.q(); ++v)
          eligible.push_back(w.flat_index(t, v));
      const auto n_mask = static_cast<std::size_t>(
          pattern.fraction * static_cast<double>(eligible.size()));
      Rng rng(pattern.seed);
      for (std::size_t i = 0; i < n_mask; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(
                                      rng.below(eligible.size() - i));
        std::swap(eligible[i], eligible[j]);
        missing(eligible[i] / w.q(), eligible[i] % w.q()) = true;
      }
      break;
    }
    case MissingPattern::Kind::PeriodicOutput: {
      if (pattern.period < 2)
        throw DomainError("periodic pattern requires period >= 2");
      for (Eigen::Index t = pattern.period - 1; t < w.T();
           t += pattern.period)
        for (Eigen::Index v = w.inputs(); v < w.q(); ++v)
          missing(t, v) = true;
      break;
    }
    case MissingPattern::Kind::Explicit: {
      for (const Eigen::Index e : pattern.entries) {
        if (e < 0 || e >= w.T() * w.q())
          throw IndexError("explicit pattern index out of range");
        missing(e / w.q(), e % w.q()) = true;
      }
      break;
    }
  }
  return IrregularSignal(w.raw_values(), std::move(missing), w.inputs());
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view field, std::size_t line_no) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ParseError("line " + std::to_string(line_no) +
                     ": not a number: '" + std::string(field) + "'");
  return value;
}

// Returns the input count when the fields form a u1..um,y1..yp header.
int parse_header(const std::vector<std::string_view>& fields) {
  int inputs = 0;
  bool in_outputs = false;
  int u_next = 1, y_next = 1;
  for (const auto f : fields) {
    if (f.size() < 2) throw ParseError("malformed CSV header");
    const char kind = f.front();
    int index = 0;
    const auto res = std::from_chars(f.data() + 1, f.data() + f.size(), index);
    if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
      throw ParseError("malformed CSV header field '" + std::string(f) + "'");
    if (kind == 'u' && !in_outputs && index == u_next) {
      ++u_next;
      ++inputs;
    } else if (kind == 'y' && index == y_next) {
      in_outputs = true;
      ++y_next;
    } else {
      throw ParseError("CSV header must read u1..um,y1..yp");
    }
  }
  if (y_next == 1) throw ParseError("CSV header names no outputs");
  return inputs;
}

bool looks_like_header(const std::vector<std::string_view>& fields) {
  for (const auto f : fields)
    if (!f.empty() && (f.front() == 'u' || f.front() == 'y')) return true;
  return false;
}

}  // namespace

IrregularSignal parse_csv(std::istream& in) {
  std::vector<double> values;
  std::vector<bool> mask;
  Eigen::Index cols = -1;
  Eigen::Index rows = 0;
  int inputs = 0;
  bool saw_header = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_fields(line);
    if (rows == 0 && !saw_header && looks_like_header(fields)) {
      inputs = parse_header(fields);
      cols = static_cast<Eigen::Index>(fields.size());
      saw_header = true;
      continue;
    }
    if (cols < 0) cols = static_cast<Eigen::Index>(fields.size());
    if (static_cast<Eigen::Index>(fields.size()) != cols)
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(cols) + " fields, got " +
                       std::to_string(fields.size()));
    for (const auto f : fields) {
      if (f == "NaN") {
        values.push_back(0.0);
        mask.push_back(true);
      } else {
        values.push_back(parse_number(f, line_no));
        mask.push_back(false);
      }
    }
    ++rows;
  }
  if (rows == 0) throw ParseError("CSV contains no data rows");

  Eigen::MatrixXd V(rows, cols);
  BoolArray M(rows, cols);
  for (Eigen::Index t = 0; t < rows; ++t)
    for (Eigen::Index v = 0; v < cols; ++v) {
      V(t, v) = values[static_cast<std::size_t>(t * cols + v)];
      M(t, v) = mask[static_cast<std::size_t>(t * cols + v)];
    }
  return IrregularSignal(std::move(V), std::move(M), inputs);
}

IrregularSignal parse_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_csv(in);
}

void write_csv(const IrregularSignal& w, std::ostream& out) {
  // The u1..um,y1..yp header carries the input split; a pure-output signal
  // stays bare. (A signal with no outputs at all has no parseable header
  // form, so it is written bare and the split is lost on read-back.)
  if (w.inputs() >= 1 && w.inputs() < w.q()) {
    for (Eigen::Index v = 0; v < w.q(); ++v) {
      if (v > 0) out << ',';
      if (v < w.inputs())
        out << 'u' << v + 1;
      else
        out << 'y' << v - w.inputs() + 1;
    }
    out << '\n';
  }
  for (Eigen::Index t = 0; t < w.T(); ++t) {
    for (Eigen::Index v = 0; v < w.q(); ++v) {
      if (v > 0) out << ',';
      if (w.is_missing(t, v))
        out << "NaN";
      else
        out << format_double(w.value(t, v));
    }
    out << '\n';
  }
}

void write_csv_file(const IrregularSignal& w, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  write_csv(w, out);
}

}  // namespace ltimd
