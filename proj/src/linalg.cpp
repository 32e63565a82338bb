#include "raidkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "raidkit/detail/householder.hpp"
#include "raidkit/error.hpp"
#include "raidkit/kernels.hpp"

namespace raidkit {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double resolve_tol(std::optional<double> rank_tol, std::size_t rows, std::size_t cols) {
  if (!rank_tol) return default_rank_tol(rows, cols);
  if (!(*rank_tol >= 0.0)) throw ContractViolation("rank_tol must be >= 0");
  return *rank_tol;
}

// Gram matrix of the smaller side: M^T M when tall, M M^T when wide.
DenseMatrix small_gram(const DenseMatrix& m) {
  const auto& k = kernels::active();
  if (m.rows() >= m.cols()) {
    const std::size_t n = m.cols();
    DenseMatrix g(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i <= j; ++i) {
        const double v = k.dot(m.col(i).data(), m.col(j).data(), m.rows());
        g(i, j) = v;
        g(j, i) = v;
      }
    }
    return g;
  }
  const std::size_t n = m.rows();
  DenseMatrix g(n, n);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const double* col = m.col(c).data();
    for (std::size_t j = 0; j < n; ++j) {
      if (col[j] != 0.0) k.axpy(col[j], col, g.col(j).data(), n);
    }
  }
  return g;
}

}  // namespace

double default_rank_tol(std::size_t rows, std::size_t cols) {
  return static_cast<double>(std::max(rows, cols)) * kEps;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ContractViolation("matmul: cannot multiply " + shape_string(a) + " by " + shape_string(b));
  }
  const auto& k = kernels::active();
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double* out = c.col(j).data();
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double s = b(p, j);
      if (s != 0.0) k.axpy(s, a.col(p).data(), out, a.rows());
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw ContractViolation("matmul_tn: cannot multiply transpose of " + shape_string(a) + " by " +
                            shape_string(b));
  }
  const auto& k = kernels::active();
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < a.cols(); ++i) {
      c(i, j) = k.dot(a.col(i).data(), b.col(j).data(), a.rows());
    }
  }
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.cols()) {
    throw ContractViolation("matmul_nt: cannot multiply " + shape_string(a) + " by transpose of " +
                            shape_string(b));
  }
  const auto& k = kernels::active();
  DenseMatrix c(a.rows(), b.rows());
  for (std::size_t j = 0; j < b.rows(); ++j) {
    double* out = c.col(j).data();
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double s = b(j, p);
      if (s != 0.0) k.axpy(s, a.col(p).data(), out, a.rows());
    }
  }
  return c;
}

double spectral_norm(const DenseMatrix& m, double tol) {
  SpectralNormOptions options;
  options.tol = tol;
  return spectral_norm(m, options);
}

double spectral_norm(const DenseMatrix& m, const SpectralNormOptions& options) {
  if (!(options.tol > 0.0)) throw ContractViolation("spectral_norm: tol must be > 0");
  if (m.empty() || m.max_abs() == 0.0) return 0.0;
  if (std::min(m.rows(), m.cols()) <= options.svd_threshold) return singular_values(m).front();
  return spectral_norm_power(m, options.tol, options.max_iterations);
}

double spectral_norm_power(const DenseMatrix& m, double tol, std::size_t max_iterations) {
  if (!(tol > 0.0)) throw ContractViolation("spectral_norm: tol must be > 0");
  if (m.empty() || m.max_abs() == 0.0) return 0.0;
  const auto& k = kernels::active();
  const DenseMatrix g = small_gram(m);
  const std::size_t n = g.rows();

  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(n);
  double lambda = 0.0;
  double residual = 0.0;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) k.axpy(x[j], g.col(j).data(), y.data(), n);
    const double next = k.dot(x.data(), y.data(), n);
    // ||G x - lambda x|| with the current unit x.
    residual = std::sqrt(std::max(0.0, k.sumsq(y.data(), n) - next * next));
    const double ynorm = std::sqrt(k.sumsq(y.data(), n));
    if (ynorm == 0.0) return 0.0;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ynorm;
    // The Rayleigh quotient creeps up slowly when the top of the spectrum is
    // clustered, so the step test is two orders tighter than the target.
    if (it > 0 && std::abs(next - lambda) <= 0.01 * tol * next) return std::sqrt(next);
    lambda = next;
  }
  throw NumericalError("spectral_norm: power iteration did not converge in " +
                           std::to_string(max_iterations) + " iterations",
                       std::sqrt(lambda), residual);
}

double matrix_norm(const DenseMatrix& m, NormKind kind) {
  return kind == NormKind::spectral ? spectral_norm(m) : m.frobenius_norm();
}

double seminorm_A(const DenseMatrix& a, const DenseMatrix& d, NormKind norm) {
  if (a.cols() != d.rows()) {
    throw ContractViolation("seminorm_A: design " + shape_string(a) + " does not conform with " +
                            shape_string(d));
  }
  return matrix_norm(matmul(a, d), norm);
}

PivotedQRFactors pivoted_qr(const DenseMatrix& a, std::optional<double> rank_tol) {
  const double tol = resolve_tol(rank_tol, a.rows(), a.cols());
  if (a.empty() || a.max_abs() == 0.0) {
    throw ContractViolation("zero matrix has no pivoted QR with nonzero diagonal");
  }
  const std::size_t steps = std::min(a.rows(), a.cols());
  detail::HouseholderQr h = detail::householder_qr(a, steps, true);

  const double lead = std::abs(h.packed(0, 0));
  std::size_t rank = 0;
  while (rank < steps && std::abs(h.packed(rank, rank)) > tol * lead) ++rank;

  PivotedQRFactors out;
  out.rank = rank;
  out.q = detail::form_q(h, rank);
  out.r_factor = detail::extract_r(h, rank);
  out.perm = std::move(h.perm);
  return out;
}

DenseMatrix apply_r_pinv(const PivotedQRFactors& qr, const DenseMatrix& w) {
  const std::size_t r = qr.rank;
  const std::size_t n = qr.r_factor.cols();
  if (w.rows() != r) {
    throw ContractViolation("apply_r_pinv: right-hand side has " + std::to_string(w.rows()) +
                            " rows, retained rank is " + std::to_string(r));
  }
  DenseMatrix z(n, w.cols());
  if (r == n) {
    for (std::size_t j = 0; j < w.cols(); ++j) {
      auto col = z.col(j);
      std::copy(w.col(j).begin(), w.col(j).end(), col.begin());
      detail::solve_upper(qr.r_factor, r, col);
    }
  } else {
    // Complete orthogonal decomposition: R^T = W T, so R = T^T W^T and the
    // minimum-norm solution of R z = c is W T^{-T} c.
    detail::HouseholderQr lq = detail::householder_qr(qr.r_factor.transpose(), r, false);
    const DenseMatrix basis = detail::form_q(lq, r);
    DenseMatrix coeffs = w;
    for (std::size_t j = 0; j < coeffs.cols(); ++j) {
      detail::solve_upper_transposed(lq.packed, r, coeffs.col(j));
    }
    z = matmul(basis, coeffs);
  }
  DenseMatrix out(n, w.cols());
  for (std::size_t j = 0; j < w.cols(); ++j) {
    for (std::size_t i = 0; i < n; ++i) out(qr.perm[i], j) = z(i, j);
  }
  return out;
}

DenseMatrix least_squares_solve(const PivotedQRFactors& qr, const DenseMatrix& b) {
  if (qr.q.rows() != b.rows()) {
    throw ContractViolation("least_squares_solve: design has " + std::to_string(qr.q.rows()) +
                            " rows but right-hand side is " + shape_string(b));
  }
  return apply_r_pinv(qr, matmul_tn(qr.q, b));
}

DenseMatrix least_squares_solve(const DenseMatrix& a, const DenseMatrix& b,
                                std::optional<double> rank_tol) {
  if (a.rows() != b.rows()) {
    throw ContractViolation("least_squares_solve: design " + shape_string(a) +
                            " and right-hand side " + shape_string(b) + " differ in rows");
  }
  if (a.max_abs() == 0.0) return DenseMatrix(a.cols(), b.cols());
  return least_squares_solve(pivoted_qr(a, rank_tol), b);
}

DenseMatrix pseudoinverse(const DenseMatrix& m, std::optional<double> rank_tol) {
  const double tol = resolve_tol(rank_tol, m.rows(), m.cols());
  if (m.empty() || m.max_abs() == 0.0) return DenseMatrix(m.cols(), m.rows());
  const SVDFactors f = svd(m);
  const double cutoff = tol * f.sigma.front();
  std::size_t r = 0;
  while (r < f.sigma.size() && f.sigma[r] > cutoff) ++r;
  // V_r diag(1/sigma) U_r^T
  DenseMatrix vs(m.cols(), r);
  for (std::size_t j = 0; j < r; ++j) {
    const auto src = f.v.col(j);
    auto dst = vs.col(j);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] / f.sigma[j];
  }
  return matmul_nt(vs, f.u.block(0, 0, m.rows(), r));
}

WhiteningOperator::WhiteningOperator(DenseMatrix v_r, DenseMatrix u_r, std::vector<double> sigma_r)
    : v_r_(std::move(v_r)), u_r_(std::move(u_r)), sigma_r_(std::move(sigma_r)) {
  if (v_r_.cols() != sigma_r_.size() || u_r_.cols() != sigma_r_.size()) {
    throw ContractViolation("whitening operator factors disagree on rank");
  }
}

DenseMatrix WhiteningOperator::reduced(const DenseMatrix& b) const {
  if (b.rows() != u_r_.rows()) {
    throw ContractViolation("whitening operator expects " + std::to_string(u_r_.rows()) +
                            " rows, got " + shape_string(b));
  }
  return matmul_tn(u_r_, b);
}

DenseMatrix WhiteningOperator::apply(const DenseMatrix& b) const { return matmul(v_r_, reduced(b)); }

DenseMatrix WhiteningOperator::apply_adjoint(const DenseMatrix& y) const {
  if (y.rows() != v_r_.rows()) {
    throw ContractViolation("whitening adjoint expects " + std::to_string(v_r_.rows()) +
                            " rows, got " + shape_string(y));
  }
  return matmul(u_r_, matmul_tn(v_r_, y));
}

DenseMatrix WhiteningOperator::inverse_sqrt_gram(const DenseMatrix& w) const {
  DenseMatrix coords = matmul_tn(v_r_, w);
  for (std::size_t i = 0; i < rank(); ++i) {
    for (std::size_t j = 0; j < coords.cols(); ++j) coords(i, j) /= sigma_r_[i];
  }
  return matmul(v_r_, coords);
}

DenseMatrix WhiteningOperator::materialize() const {
  if (u_r_.rows() > kMaterializeLimit) {
    throw ContractViolation("whitening operator with " + std::to_string(u_r_.rows()) +
                            " rows is not materialized (limit " +
                            std::to_string(kMaterializeLimit) + "); apply it instead");
  }
  return matmul_nt(v_r_, u_r_);
}

WhiteningOperator whitening_operator(const DenseMatrix& a, std::optional<double> rank_tol) {
  const double tol = resolve_tol(rank_tol, a.rows(), a.cols());
  if (a.empty() || a.max_abs() == 0.0) {
    throw ContractViolation("whitening undefined for zero design matrix");
  }
  SVDFactors f = svd(a);
  const double cutoff = tol * f.sigma.front();
  std::size_t r = 0;
  while (r < f.sigma.size() && f.sigma[r] > cutoff) ++r;
  f.sigma.resize(r);
  return WhiteningOperator(f.v.block(0, 0, a.cols(), r), f.u.block(0, 0, a.rows(), r),
                           std::move(f.sigma));
}

}  // namespace raidkit
