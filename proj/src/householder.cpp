#include "raidkit/detail/householder.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "raidkit/kernels.hpp"

namespace raidkit::detail {
namespace {

// Downdated column norms are recomputed once they have shrunk below this
// fraction (squared) of their last exact value; keeps the estimates accurate
// to roughly steps * eps / kRecompute relative.
constexpr double kRecompute = 1e-3;

// Applies I - tau v v^T (v = [1; tail]) to y, both of length len.
void apply_reflector(const double* tail, double tau, double* y, std::size_t len) {
  if (tau == 0.0 || len == 0) return;
  const auto& k = kernels::active();
  const double w = y[0] + k.dot(tail, y + 1, len - 1);
  y[0] -= tau * w;
  k.axpy(-tau * w, tail, y + 1, len - 1);
}

}  // namespace

HouseholderQr householder_qr(DenseMatrix a, std::size_t max_steps, bool pivot) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t steps = std::min({max_steps, m, n});
  const auto& k = kernels::active();

  HouseholderQr qr;
  qr.perm.resize(n);
  std::iota(qr.perm.begin(), qr.perm.end(), std::size_t{0});
  qr.tau.assign(steps, 0.0);

  std::vector<double> vn1(n, 0.0);
  std::vector<double> vn2(n, 0.0);
  if (pivot) {
    for (std::size_t j = 0; j < n; ++j) {
      vn1[j] = std::sqrt(k.sumsq(a.col(j).data(), m));
      vn2[j] = vn1[j];
    }
  }

  for (std::size_t i = 0; i < steps; ++i) {
    if (pivot) {
      std::size_t best = i;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (vn1[j] > vn1[best] || (vn1[j] == vn1[best] && qr.perm[j] < qr.perm[best])) best = j;
      }
      if (best != i) {
        std::swap_ranges(a.col(i).begin(), a.col(i).end(), a.col(best).begin());
        std::swap(qr.perm[i], qr.perm[best]);
        std::swap(vn1[i], vn1[best]);
        std::swap(vn2[i], vn2[best]);
      }
    }

    double* x = a.col(i).data() + i;
    const std::size_t len = m - i;
    const double alpha = x[0];
    const double xnorm = len > 1 ? std::sqrt(k.sumsq(x + 1, len - 1)) : 0.0;
    double tau = 0.0;
    if (xnorm != 0.0) {
      const double beta = -std::copysign(std::hypot(alpha, xnorm), alpha);
      tau = (beta - alpha) / beta;
      k.scal(1.0 / (alpha - beta), x + 1, len - 1);
      x[0] = beta;
    }
    qr.tau[i] = tau;

    for (std::size_t j = i + 1; j < n; ++j) {
      apply_reflector(x + 1, tau, a.col(j).data() + i, len);
    }

    if (pivot) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (vn1[j] == 0.0) continue;
        const double ratio = std::abs(a(i, j)) / vn1[j];
        const double shrink = std::max(0.0, (1.0 - ratio) * (1.0 + ratio));
        const double rel = vn1[j] / vn2[j];
        if (shrink * rel * rel <= kRecompute) {
          vn1[j] = len > 1 ? std::sqrt(k.sumsq(a.col(j).data() + i + 1, len - 1)) : 0.0;
          vn2[j] = vn1[j];
        } else {
          vn1[j] *= std::sqrt(shrink);
        }
      }
    }
  }

  qr.packed = std::move(a);
  qr.steps = steps;
  return qr;
}

DenseMatrix form_q(const HouseholderQr& qr, std::size_t ncols) {
  const std::size_t m = qr.packed.rows();
  DenseMatrix q(m, ncols);
  for (std::size_t j = 0; j < std::min(m, ncols); ++j) q(j, j) = 1.0;
  for (std::size_t step = qr.steps; step-- > 0;) {
    const double* tail = qr.packed.col(step).data() + step + 1;
    for (std::size_t j = step; j < ncols; ++j) {
      apply_reflector(tail, qr.tau[step], q.col(j).data() + step, m - step);
    }
  }
  return q;
}

DenseMatrix extract_r(const HouseholderQr& qr, std::size_t nrows) {
  const std::size_t n = qr.packed.cols();
  DenseMatrix r(nrows, n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t top = std::min(nrows, j + 1);
    for (std::size_t i = 0; i < top; ++i) r(i, j) = qr.packed(i, j);
  }
  return r;
}

void apply_qt(const HouseholderQr& qr, DenseMatrix& b) {
  const std::size_t m = qr.packed.rows();
  for (std::size_t step = 0; step < qr.steps; ++step) {
    const double* tail = qr.packed.col(step).data() + step + 1;
    for (std::size_t j = 0; j < b.cols(); ++j) {
      apply_reflector(tail, qr.tau[step], b.col(j).data() + step, m - step);
    }
  }
}

void solve_upper(const DenseMatrix& u, std::size_t n, std::span<double> b) {
  // Column-oriented back substitution so the updates run on contiguous columns.
  const auto& k = kernels::active();
  for (std::size_t i = n; i-- > 0;) {
    const double d = u(i, i);
    b[i] = d == 0.0 ? 0.0 : b[i] / d;
    if (i > 0 && b[i] != 0.0) k.axpy(-b[i], u.col(i).data(), b.data(), i);
  }
}

void solve_upper_transposed(const DenseMatrix& u, std::size_t n, std::span<double> b) {
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < n; ++i) {
    const double s = b[i] - k.dot(u.col(i).data(), b.data(), i);
    const double d = u(i, i);
    b[i] = d == 0.0 ? 0.0 : s / d;
  }
}

}  // namespace raidkit::detail
