#include "raidkit/regression_aware.hpp"

#include <algorithm>
#include <string>

#include "raidkit/error.hpp"

namespace raidkit {
namespace {

// Everything the two methods need from A, held once per call.
struct Projection {
  Method method;
  std::optional<PivotedQRFactors> qr;
  std::optional<WhiteningOperator> whitening;
  DenseMatrix projected;  // Q^T B or S B
  std::size_t rank = 0;

  const DenseMatrix& basis() const { return qr ? qr->q : whitening->u_r(); }
};

void require_conforming(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) {
    throw ContractViolation("design A " + shape_string(a) + " and target B " + shape_string(b) +
                            " must have the same number of rows");
  }
  if (a.empty() || a.max_abs() == 0.0) {
    throw ContractViolation("whitening undefined for zero design matrix");
  }
}

Projection project(const DenseMatrix& a, const DenseMatrix& b, Method method,
                   std::optional<double> rank_tol) {
  require_conforming(a, b);
  Projection p{method, std::nullopt, std::nullopt, {}, 0};
  if (method == Method::qr) {
    p.qr = pivoted_qr(a, rank_tol);
    p.rank = p.qr->rank;
    p.projected = matmul_tn(p.qr->q, b);
  } else {
    p.whitening = whitening_operator(a, rank_tol);
    p.rank = p.whitening->rank();
    p.projected = p.whitening->apply(b);
  }
  return p;
}

void require_k(std::size_t k, std::size_t rank, std::size_t ncols) {
  const std::size_t limit = std::min(rank, ncols);
  if (k < 1 || k > limit) {
    throw ContractViolation("k = " + std::to_string(k) + " must satisfy 1 <= k <= min(r, n) = " +
                            std::to_string(limit) + " (retained rank of A is r = " +
                            std::to_string(rank) + ", B has n = " + std::to_string(ncols) +
                            " columns)");
  }
}

// ||B - A A^+ B|| via the orthonormal basis of range(A).
void fill_min_residual(const Projection& p, const DenseMatrix& b, RAIDResult& out) {
  DenseMatrix residual = b;
  residual -= matmul(p.basis(), matmul_tn(p.basis(), b));
  out.min_residual = spectral_norm(residual);
  out.min_residual_frobenius = residual.frobenius_norm();
}

RAIDResult finish_raid(const DenseMatrix& a, const DenseMatrix& b, const Projection& p,
                       IDResult id, std::optional<double> rank_tol) {
  RAIDResult out;
  out.method = p.method;
  out.design_rank = p.rank;
  DenseMatrix diff = p.projected;
  diff -= matmul(p.projected.columns(id.selected), id.p);
  out.raid_error = spectral_norm(diff);
  out.raid_error_frobenius = diff.frobenius_norm();
  const DenseMatrix c = b.columns(id.selected);
  out.y = p.qr ? least_squares_solve(*p.qr, c) : least_squares_solve(a, c, rank_tol);
  out.id = std::move(id);
  fill_min_residual(p, b, out);
  return out;
}

}  // namespace

std::string_view method_name(Method method) {
  return method == Method::qr ? "qr" : "whitened";
}

Method parse_method(std::string_view name) {
  if (name == "qr") return Method::qr;
  if (name == "whitened") return Method::whitened;
  throw ContractViolation("unknown method '" + std::string(name) + "' (expected qr or whitened)");
}

RAIDResult raid(const DenseMatrix& a, const DenseMatrix& b, std::size_t k, Method method,
                std::optional<double> rank_tol, const IDOptions& id_options) {
  const Projection p = project(a, b, method, rank_tol);
  require_k(k, p.rank, b.cols());
  IDResult id = id_fixed_rank(p.projected, k, id_options);
  return finish_raid(a, b, p, std::move(id), rank_tol);
}

RAIDResult raid_fixed_precision(const DenseMatrix& a, const DenseMatrix& b, double eps,
                                Method method, std::optional<double> rank_tol,
                                const IDOptions& id_options) {
  const Projection p = project(a, b, method, rank_tol);
  IDResult id = id_fixed_precision(p.projected, eps, id_options);
  require_k(id.k(), p.rank, b.cols());
  return finish_raid(a, b, p, std::move(id), rank_tol);
}

RAIDResult raid_solution_space(const DenseMatrix& a, const DenseMatrix& b, std::size_t k,
                               std::optional<double> rank_tol) {
  require_conforming(a, b);
  const PivotedQRFactors qr = pivoted_qr(a, rank_tol);
  require_k(k, qr.rank, b.cols());
  const DenseMatrix x = least_squares_solve(qr, b);

  RAIDResult out;
  out.method = Method::qr;
  out.solution_space = true;
  out.design_rank = qr.rank;
  out.id = id_fixed_rank(x, k);
  out.y = x.columns(out.id.selected);
  DenseMatrix diff = x;
  diff -= matmul(out.y, out.id.p);
  out.raid_error = spectral_norm(diff);
  out.raid_error_frobenius = diff.frobenius_norm();
  DenseMatrix residual = b;
  residual -= matmul(qr.q, matmul_tn(qr.q, b));
  out.min_residual = spectral_norm(residual);
  out.min_residual_frobenius = residual.frobenius_norm();
  return out;
}

RAPCAResult rapca(const DenseMatrix& a, const DenseMatrix& b, std::size_t k, Method method,
                  std::optional<double> rank_tol) {
  require_conforming(a, b);
  RAPCAResult out;
  out.method = method;
  // For the whitened path S B = V_r (U_r^T B), and V_r has orthonormal
  // columns, so the SVD of the r x nb matrix U_r^T B carries everything.
  std::optional<PivotedQRFactors> qr;
  std::optional<WhiteningOperator> whitening;
  DenseMatrix reduced;
  if (method == Method::qr) {
    qr = pivoted_qr(a, rank_tol);
    out.design_rank = qr->rank;
    reduced = matmul_tn(qr->q, b);
  } else {
    whitening = whitening_operator(a, rank_tol);
    out.design_rank = whitening->rank();
    reduced = whitening->reduced(b);
  }
  require_k(k, out.design_rank, b.cols());

  const SVDFactors f = svd(reduced);
  out.projected_spectrum = f.sigma;
  out.sigma.assign(f.sigma.begin(), f.sigma.begin() + static_cast<std::ptrdiff_t>(k));
  out.rapca_error = k < f.sigma.size() ? f.sigma[k] : 0.0;
  const DenseMatrix uk = f.u.block(0, 0, f.u.rows(), k);
  out.v = f.v.block(0, 0, f.v.rows(), k);
  if (qr) {
    out.u = uk;
    out.t = apply_r_pinv(*qr, uk);
  } else {
    out.u = matmul(whitening->v_r(), uk);
    out.t = whitening->inverse_sqrt_gram(out.u);
  }
  return out;
}

CCASpectrum cca_spectrum(const DenseMatrix& a, const DenseMatrix& b,
                         std::optional<double> rank_tol) {
  if (a.rows() != b.rows()) {
    throw ContractViolation("cca_spectrum: A " + shape_string(a) + " and B " + shape_string(b) +
                            " must have the same number of rows");
  }
  if (a.max_abs() == 0.0 || b.max_abs() == 0.0) {
    throw ContractViolation("cca_spectrum: A and B must both be nonzero");
  }
  const PivotedQRFactors qa = pivoted_qr(a, rank_tol);
  const PivotedQRFactors qb = pivoted_qr(b, rank_tol);
  CCASpectrum out;
  out.sigma = singular_values(matmul_tn(qa.q, qb.q));
  if (!out.sigma.empty()) out.max_unclamped = out.sigma.front();
  for (double& s : out.sigma) s = std::clamp(s, 0.0, 1.0);
  return out;
}

std::vector<double> rapca_spectrum(const DenseMatrix& a, const DenseMatrix& b,
                                   std::optional<double> rank_tol) {
  require_conforming(a, b);
  const PivotedQRFactors qa = pivoted_qr(a, rank_tol);
  return singular_values(matmul_tn(qa.q, b));
}

}  // namespace raidkit
