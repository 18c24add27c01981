#include "ltimd/lti.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "ltimd/exceptions.hpp"
#include "ltimd/hankel.hpp"
#include "ltimd/rng.hpp"

namespace ltimd {

void StateSpaceModel::validate() const {
  if (A.rows() != A.cols()) throw DimensionError("A must be square");
  if (B.rows() != A.rows()) throw DimensionError("B row count must match A");
  if (C.cols() != A.rows()) throw DimensionError("C column count must match A");
  if (D.rows() != C.rows() || D.cols() != B.cols())
    throw DimensionError("D must be p x m");
  if (C.rows() < 1) throw DimensionError("model needs at least one output");
}

IrregularSignal simulate(const StateSpaceModel& model,
                         const Eigen::VectorXd& x0, const Eigen::MatrixXd& u) {
  model.validate();
  if (x0.size() != model.n())
    throw DimensionError("initial state size must match the model order");
  if (u.cols() != model.m())
    throw DimensionError("input column count must match the model");
  const Eigen::Index T = u.rows();
  if (T < 1) throw DimensionError("simulation needs at least one step");

  const int m = model.m();
  const int p = model.p();
  Eigen::MatrixXd w(T, m + p);
  Eigen::VectorXd x = x0;
  for (Eigen::Index t = 0; t < T; ++t) {
    const Eigen::VectorXd ut = u.row(t).transpose();
    w.row(t).head(m) = ut.transpose();
    w.row(t).tail(p) = (model.C * x + model.D * ut).transpose();
    x = model.A * x + model.B * ut;
  }
  return IrregularSignal::complete(std::move(w), m);
}

IrregularSignal simulate_free(const StateSpaceModel& model,
                              const Eigen::VectorXd& x0, Eigen::Index T) {
  if (model.m() != 0)
    throw DimensionError("free response requires an autonomous model");
  return simulate(model, x0, Eigen::MatrixXd(T, 0));
}

int observability_index(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C,
                        const ToleranceConfig& tol) {
  const Eigen::Index n = A.rows();
  if (n == 0) return 0;
  const Eigen::Index p = C.rows();
  Eigen::MatrixXd O(p * n, n);
  Eigen::MatrixXd block = C;
  for (Eigen::Index k = 0; k < n; ++k) {
    O.middleRows(k * p, p) = block;
    if (numerical_rank(O.topRows((k + 1) * p), tol) == n)
      return static_cast<int>(k + 1);
    block = block * A;
  }
  throw RankError("pair (A, C) is not observable");
}

bool is_controllable(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                     const ToleranceConfig& tol) {
  const Eigen::Index n = A.rows();
  if (n == 0) return true;
  if (B.cols() == 0) return false;
  Eigen::MatrixXd ctrb(n, n * B.cols());
  Eigen::MatrixXd block = B;
  for (Eigen::Index k = 0; k < n; ++k) {
    ctrb.middleCols(k * B.cols(), B.cols()) = block;
    block = A * block;
  }
  return numerical_rank(ctrb, tol) == n;
}

namespace {

// Monic polynomial coefficients (ascending powers, without the leading 1)
// from a spectrum sampled with moduli in [0.5, 0.99].
std::vector<double> sample_char_poly(Rng& rng, int degree) {
  std::vector<double> poly{1.0};  // constant polynomial, ascending powers
  auto mul = [&poly](const std::vector<double>& f) {
    std::vector<double> out(poly.size() + f.size() - 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (std::size_t j = 0; j < f.size(); ++j) out[i + j] += poly[i] * f[j];
    poly = std::move(out);
  };
  int left = degree;
  while (left >= 2) {
    if (rng.uniform() < 0.5) {
      const double r = rng.uniform(0.5, 0.99);
      const double theta = rng.uniform(0.15, M_PI - 0.15);
      // (z - re^{i t})(z - re^{-i t}) = z^2 - 2r cos(t) z + r^2
      mul({r * r, -2.0 * r * std::cos(theta), 1.0});
    } else {
      for (int i = 0; i < 2; ++i) {
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        mul({-sign * rng.uniform(0.5, 0.99), 1.0});
      }
    }
    left = degree + 1 - static_cast<int>(poly.size());
  }
  if (left == 1) {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    mul({-sign * rng.uniform(0.5, 0.99), 1.0});
  }
  poly.pop_back();  // drop the leading 1
  return poly;      // a_0, a_1, ..., a_{degree-1}
}

}  // namespace

StateSpaceModel random_system(const Complexity& cx, std::uint64_t seed) {
  cx.validate();
  Rng rng(seed);

  // Observability indices: one length-ell chain, the rest filled greedily.
  std::vector<int> mu(static_cast<std::size_t>(cx.p), 0);
  int rest = cx.n;
  for (int i = 0; i < cx.p && rest > 0; ++i) {
    mu[static_cast<std::size_t>(i)] = std::min(cx.ell, rest);
    rest -= mu[static_cast<std::size_t>(i)];
  }

  for (int attempt = 0; attempt < 100; ++attempt) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(cx.n, cx.n);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(cx.p, cx.n);
    int offset = 0;
    for (int i = 0; i < cx.p; ++i) {
      const int len = mu[static_cast<std::size_t>(i)];
      if (len == 0) continue;
      const auto a = sample_char_poly(rng, len);
      // Observable canonical block: first column carries -a, superdiagonal 1.
      for (int r = 0; r < len; ++r) {
        A(offset + r, offset) = -a[static_cast<std::size_t>(len - 1 - r)];
        if (r + 1 < len) A(offset + r, offset + r + 1) = 1.0;
      }
      C(i, offset) = 1.0;
      offset += len;
    }
    // Outputs without a chain observe a combination of the chain outputs, so
    // they cannot shorten the lag.
    for (int i = 0; i < cx.p; ++i) {
      if (mu[static_cast<std::size_t>(i)] != 0) continue;
      Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(cx.n);
      for (int j = 0; j < cx.p; ++j)
        if (mu[static_cast<std::size_t>(j)] != 0)
          row += rng.uniform(-1.0, 1.0) * C.row(j);
      C.row(i) = row;
    }

    StateSpaceModel model;
    model.A = std::move(A);
    model.B = rng.uniform_matrix(cx.n, cx.m, -1.0, 1.0);
    model.C = std::move(C);
    model.D = rng.uniform_matrix(cx.p, cx.m, -1.0, 1.0);

    if (cx.n > 0) {
      const Eigen::MatrixXd Q = rng.orthogonal(cx.n);
      model.A = Q * model.A * Q.transpose();
      model.B = Q * model.B;
      model.C = model.C * Q.transpose();
    }
    if (cx.p > 1) {
      const Eigen::MatrixXd S = rng.orthogonal(cx.p);
      model.C = S * model.C;
      model.D = S * model.D;
    }

    try {
      if (observability_index(model.A, model.C) != cx.ell) continue;
    } catch (const RankError&) {
      continue;
    }
    if (cx.m >= 1 && !is_controllable(model.A, model.B)) continue;
    return model;
  }
  throw DomainError("failed to sample a system of the requested complexity");
}

KernelRep oracle_kernel(const IrregularSignal& w, const Complexity& cx, int d,
                        const ToleranceConfig& tol) {
  cx.validate();
  if (w.any_missing())
    throw MaskError("the oracle kernel needs a complete trajectory");
  if (d < cx.ell + 1)
    throw DomainError("kernel depth must be at least ell + 1");
  const MaskedMatrix H = build_hankel(w, d);
  if (numerical_rank(H.values, tol) != cx.m * d + cx.n)
    throw GpeViolation("rank H_d(w) != m*d + n");
  return make_kernel(left_nullspace_basis(H.values, tol), d, cx, true, tol);
}

bool check_pe_mosaic(const Eigen::MatrixXd& u, const Complexity& cx, int n_c,
                     const ToleranceConfig& tol, std::string* diagnostic) {
  cx.validate();
  if (cx.m < 1) throw DomainError("the mosaic test needs at least one input");
  if (u.cols() != cx.m)
    throw DimensionError("input column count must match the complexity");
  const int win = cx.n + cx.ell + 3;   // samples per window
  const int stride = cx.ell + 1;
  if (n_c < 0) n_c = cx.m * win;
  const Eigen::Index T = u.rows();
  const Eigen::Index T_min =
      static_cast<Eigen::Index>(cx.m) * win * stride + cx.n + 2;
  if (T < T_min) {
    if (diagnostic)
      *diagnostic = "input too short: T = " + std::to_string(T) +
                    " < " + std::to_string(T_min);
    return false;
  }
  const Eigen::Index available = (T - win) / stride + 1;
  if (n_c < 1) throw DomainError("window count must be positive");
  if (n_c > available)
    throw DimensionError("window count exceeds the available windows");

  Eigen::MatrixXd M(cx.m * win, n_c);
  for (int j = 0; j < n_c; ++j)
    for (int i = 0; i < win; ++i)
      M.block(i * cx.m, j, cx.m, 1) =
          u.row(j * stride + i).transpose();
  const bool ok = numerical_rank(M, tol) == cx.m * win;
  if (!ok && diagnostic) *diagnostic = "mosaic matrix is row-rank deficient";
  return ok;
}

bool check_sample_observability(const StateSpaceModel& model,
                                const ToleranceConfig& tol) {
  model.validate();
  const int ell = observability_index(model.A, model.C, tol);
  if (ell < 2)
    throw DomainError("sample observability is defined for lag >= 2");
  const int p = model.p();
  const int n = model.n();
  Eigen::MatrixXd Os(p * ell, n);
  Eigen::MatrixXd block = model.C;
  for (int k = 0; k <= ell - 2; ++k) {
    Os.middleRows(k * p, p) = block;
    block = block * model.A;
  }
  // block now holds C A^{ell-1}; two more steps reach C A^{ell+1}.
  block = block * model.A * model.A;
  Os.middleRows((ell - 1) * p, p) = block;
  return numerical_rank(Os, tol) == n;
}

}  // namespace ltimd
