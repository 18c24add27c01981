#include "ltimd/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ltimd/exceptions.hpp"
#include "ltimd/signals.hpp"

namespace ltimd {

namespace {

double parse_field(std::string_view field, const char* what) {
  // Trim surrounding blanks; accept an optional leading '+'.
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
    field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' ||
                            field.back() == '\r'))
    field.remove_suffix(1);
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0.0;
  const auto* begin = field.data();
  const auto* end = field.data() + field.size();
  const auto result = std::from_chars(begin, end, value);
  if (result.ec != std::errc() || result.ptr != end)
    throw ParseError(std::string("malformed ") + what + " entry '" +
                     std::string(field) + "'");
  return value;
}

Eigen::MatrixXd parse_rows(const std::vector<std::string>& lines,
                           const char* what) {
  std::vector<std::vector<double>> rows;
  for (const auto& line : lines) {
    std::vector<double> row;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view field(line.data() + start,
                                   (comma == std::string::npos ? line.size()
                                                               : comma) -
                                       start);
      row.push_back(parse_field(field, what));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw ParseError(std::string("ragged ") + what + " file");
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()),
                    rows.empty() ? 0
                                 : static_cast<Eigen::Index>(
                                       rows.front().size()));
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return M;
}

// Collects the non-empty lines of the stream; strips one optional leading
// '# key=value, ...' comment into the returned map.
std::map<std::string, std::string> read_lines(std::istream& in,
                                              std::vector<std::string>& lines,
                                              const char* what) {
  std::map<std::string, std::string> header;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line.front() == '#') {
      std::string body = line.substr(1);
      std::istringstream fields(body);
      std::string field;
      while (std::getline(fields, field, ',')) {
        const std::size_t eq = field.find('=');
        if (eq == std::string::npos)
          throw ParseError(std::string("malformed ") + what + " header");
        std::string key = field.substr(0, eq);
        std::string value = field.substr(eq + 1);
        const auto strip = [](std::string& s) {
          while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
            s.erase(s.begin());
          while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
            s.pop_back();
        };
        strip(key);
        strip(value);
        header[key] = value;
      }
      first = false;
      continue;
    }
    first = false;
    lines.push_back(line);
  }
  return header;
}

int header_int(const std::map<std::string, std::string>& header,
               const std::string& key, const char* what) {
  const auto it = header.find(key);
  if (it == header.end())
    throw ParseError(std::string(what) + " header lacks '" + key + "'");
  return static_cast<int>(parse_field(it->second, what));
}

void write_matrix_rows(const Eigen::MatrixXd& M, std::ostream& out) {
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(M(i, j));
    }
    out << '\n';
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  return in;
}

void write_header(int d, const Complexity& cx, bool exact,
                  std::ostream& out) {
  out << "# d=" << d << ", m=" << cx.m << ", p=" << cx.p << ", n=" << cx.n
      << ", ell=" << cx.ell << ", exact=" << (exact ? "true" : "false")
      << '\n';
}

}  // namespace

void write_kernel_csv(const KernelRep& kernel, std::ostream& out) {
  write_header(kernel.d, kernel.cx, kernel.exact, out);
  write_matrix_rows(kernel.R, out);
}

void write_kernel_csv_file(const KernelRep& kernel, const std::string& path) {
  auto out = open_out(path);
  write_kernel_csv(kernel, out);
}

KernelRep read_kernel_csv(std::istream& in) {
  std::vector<std::string> lines;
  const auto header = read_lines(in, lines, "kernel");
  if (lines.empty()) throw ParseError("kernel file has no matrix rows");
  KernelRep kernel;
  kernel.d = header_int(header, "d", "kernel");
  kernel.cx.m = header_int(header, "m", "kernel");
  kernel.cx.p = header_int(header, "p", "kernel");
  kernel.cx.n = header_int(header, "n", "kernel");
  kernel.cx.ell = header_int(header, "ell", "kernel");
  const auto it = header.find("exact");
  if (it == header.end()) throw ParseError("kernel header lacks 'exact'");
  if (it->second != "true" && it->second != "false")
    throw ParseError("kernel header 'exact' must be true or false");
  kernel.exact = it->second == "true";
  kernel.cx.validate();
  kernel.R = parse_rows(lines, "kernel");
  if (kernel.R.rows() !=
          Eigen::Index(kernel.cx.p) * kernel.d - kernel.cx.n ||
      kernel.R.cols() != Eigen::Index(kernel.cx.q()) * kernel.d)
    throw DimensionError("kernel matrix shape disagrees with its header");
  return kernel;
}

KernelRep read_kernel_csv_file(const std::string& path) {
  auto in = open_in(path);
  return read_kernel_csv(in);
}

void write_basis_csv(const Eigen::MatrixXd& P, int L, const Complexity& cx,
                     bool exact, std::ostream& out) {
  write_header(L, cx, exact, out);
  write_matrix_rows(P, out);
}

void write_basis_csv_file(const Eigen::MatrixXd& P, int L,
                          const Complexity& cx, bool exact,
                          const std::string& path) {
  auto out = open_out(path);
  write_basis_csv(P, L, cx, exact, out);
}

void write_model_csv(const StateSpaceModel& model, std::ostream& out) {
  model.validate();
  out << "# n=" << model.n() << ", m=" << model.m() << ", p=" << model.p()
      << '\n';
  Eigen::MatrixXd block(model.n() + model.p(), model.n() + model.m());
  block << model.A, model.B, model.C, model.D;
  write_matrix_rows(block, out);
}

void write_model_csv_file(const StateSpaceModel& model,
                          const std::string& path) {
  auto out = open_out(path);
  write_model_csv(model, out);
}

StateSpaceModel read_model_csv(std::istream& in) {
  std::vector<std::string> lines;
  const auto header = read_lines(in, lines, "model");
  const int n = header_int(header, "n", "model");
  const int m = header_int(header, "m", "model");
  const int p = header_int(header, "p", "model");
  if (n < 0 || m < 0 || p < 1)
    throw ParseError("model header dimensions out of range");
  const Eigen::MatrixXd block = parse_rows(lines, "model");
  if (block.rows() != n + p || block.cols() != n + m)
    throw DimensionError("model matrix shape disagrees with its header");
  StateSpaceModel model;
  model.A = block.topLeftCorner(n, n);
  model.B = block.topRightCorner(n, m);
  model.C = block.bottomLeftCorner(p, n);
  model.D = block.bottomRightCorner(p, m);
  return model;
}

StateSpaceModel read_model_csv_file(const std::string& path) {
  auto in = open_in(path);
  return read_model_csv(in);
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::string> lines;
  read_lines(in, lines, "matrix");
  return parse_rows(lines, "matrix");
}

Eigen::MatrixXd read_matrix_csv_file(const std::string& path) {
  auto in = open_in(path);
  return read_matrix_csv(in);
}

void write_matrix_csv(const Eigen::MatrixXd& M, std::ostream& out) {
  write_matrix_rows(M, out);
}

}  // namespace ltimd
