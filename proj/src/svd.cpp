// Thin SVD: pivoted Householder QR of the tall orientation, then one-sided
// (Hestenes) Jacobi on R^T. The QR step concentrates the spectrum on the
// diagonal so Jacobi typically converges in a handful of sweeps.
//
// With M P = Q R (P the column pivot) and R^T J = W diag(sigma) from Jacobi,
// R = J diag(sigma) W^T, hence U = Q J and V = P W.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "raidkit/detail/householder.hpp"
#include "raidkit/error.hpp"
#include "raidkit/kernels.hpp"
#include "raidkit/linalg.hpp"

namespace raidkit {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSweeps = 80;

struct JacobiOutput {
  DenseMatrix x;  // columns = sigma_i * w_i
  DenseMatrix j;  // accumulated rotations (empty when not requested)
};

// Orthogonalizes the columns of x in place. When accumulate is set, the same
// rotations are applied to an identity matrix.
JacobiOutput one_sided_jacobi(DenseMatrix x, bool accumulate) {
  const std::size_t n = x.cols();
  const std::size_t len = x.rows();
  const auto& k = kernels::active();
  DenseMatrix rot = accumulate ? DenseMatrix::identity(n) : DenseMatrix();
  const double tol = std::max<double>(static_cast<double>(len), 4.0) * kEps;

  std::vector<double> norms(n);
  for (std::size_t c = 0; c < n; ++c) norms[c] = k.sumsq(x.col(c).data(), len);
  const double largest = n == 0 ? 0.0 : *std::max_element(norms.begin(), norms.end());
  // Columns below this are roundoff and are left as they are.
  const double negligible = kEps * kEps * largest;
  double off = 0.0;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double alpha = norms[p];
        const double beta = norms[q];
        if (alpha <= negligible || beta <= negligible) continue;
        const double gamma = k.dot(x.col(p).data(), x.col(q).data(), len);
        const double scale = std::sqrt(alpha) * std::sqrt(beta);
        off = std::max(off, std::abs(gamma) / scale);
        if (std::abs(gamma) <= tol * scale) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double s = c * t;
        // x_p <- c x_p - s x_q ; x_q <- s x_p + c x_q
        k.rot(x.col(p).data(), x.col(q).data(), len, c, s);
        if (accumulate) k.rot(rot.col(p).data(), rot.col(q).data(), n, c, s);
        norms[p] = k.sumsq(x.col(p).data(), len);
        norms[q] = k.sumsq(x.col(q).data(), len);
      }
    }
    if (!rotated) return {std::move(x), std::move(rot)};
  }
  throw NumericalError("svd: one-sided Jacobi did not converge in " + std::to_string(kMaxSweeps) +
                           " sweeps",
                       0.0, off);
}

// Fills the columns of v not flagged in `valid` with an orthonormal
// completion, by twice-iterated Gram-Schmidt on canonical vectors.
void complete_basis(DenseMatrix& v, const std::vector<bool>& valid) {
  const auto& k = kernels::active();
  const std::size_t n = v.rows();
  std::vector<std::size_t> done;
  for (std::size_t j = 0; j < v.cols(); ++j) {
    if (valid[j]) done.push_back(j);
  }
  std::size_t candidate = 0;
  std::vector<double> e(n);
  for (std::size_t j = 0; j < v.cols(); ++j) {
    if (valid[j]) continue;
    while (candidate < n) {
      std::fill(e.begin(), e.end(), 0.0);
      e[candidate++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t d : done) k.axpy(-k.dot(v.col(d).data(), e.data(), n), v.col(d).data(), e.data(), n);
      }
      const double nrm = std::sqrt(k.sumsq(e.data(), n));
      if (nrm > 0.5) {
        for (std::size_t i = 0; i < n; ++i) v(i, j) = e[i] / nrm;
        done.push_back(j);
        break;
      }
    }
  }
}

SVDFactors tall_svd(const DenseMatrix& m, bool want_vectors) {
  const std::size_t n = m.cols();
  detail::HouseholderQr h = detail::householder_qr(m, n, true);
  const DenseMatrix r = detail::extract_r(h, n);
  JacobiOutput jac = one_sided_jacobi(r.transpose(), want_vectors);

  std::vector<double> sigma(n);
  for (std::size_t c = 0; c < n; ++c) sigma[c] = std::sqrt(kernels::sumsq(jac.x.col(c)));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sigma[a] > sigma[b]; });

  SVDFactors out;
  out.sigma.resize(n);
  for (std::size_t c = 0; c < n; ++c) out.sigma[c] = sigma[order[c]];
  if (!want_vectors) return out;

  const DenseMatrix q = detail::form_q(h, n);
  DenseMatrix j_sorted(n, n);
  DenseMatrix w(n, n);
  std::vector<bool> valid(n, false);
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t src = order[c];
    std::copy(jac.j.col(src).begin(), jac.j.col(src).end(), j_sorted.col(c).begin());
    if (sigma[src] > kEps * out.sigma.front()) {
      const auto x = jac.x.col(src);
      for (std::size_t i = 0; i < n; ++i) w(i, c) = x[i] / sigma[src];
      valid[c] = true;
    }
  }
  complete_basis(w, valid);

  out.u = matmul(q, j_sorted);
  out.v = DenseMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < n; ++c) out.v(h.perm[i], c) = w(i, c);
  }
  return out;
}

}  // namespace

SVDFactors svd(const DenseMatrix& m) {
  if (m.empty()) return {DenseMatrix(m.rows(), 0), {}, DenseMatrix(m.cols(), 0)};
  if (m.rows() >= m.cols()) return tall_svd(m, true);
  SVDFactors t = tall_svd(m.transpose(), true);
  std::swap(t.u, t.v);
  return t;
}

std::vector<double> singular_values(const DenseMatrix& m) {
  if (m.empty()) return {};
  if (m.rows() >= m.cols()) return tall_svd(m, false).sigma;
  return tall_svd(m.transpose(), false).sigma;
}

}  // namespace raidkit
