#include "raidkit/interp_decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "raidkit/detail/householder.hpp"
#include "raidkit/error.hpp"
#include "raidkit/linalg.hpp"

namespace raidkit {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_rank(const DenseMatrix& b, std::size_t k) {
  const std::size_t limit = std::min(b.rows(), b.cols());
  if (k < 1 || k > limit) {
    throw ContractViolation("ID rank k = " + std::to_string(k) + " must satisfy 1 <= k <= " +
                            std::to_string(limit) + " for a " + shape_string(b) + " matrix");
  }
}

// P from the first k steps of a pivoted QR held in h.
DenseMatrix interpolation_from_qr(const detail::HouseholderQr& h, std::size_t k) {
  const std::size_t n = h.packed.cols();
  DenseMatrix p(k, n);
  std::vector<double> rhs(k);
  for (std::size_t i = 0; i < k; ++i) p(i, h.perm[i]) = 1.0;
  for (std::size_t j = k; j < n; ++j) {
    for (std::size_t i = 0; i < k; ++i) rhs[i] = h.packed(i, j);
    detail::solve_upper(h.packed, k, rhs);
    for (std::size_t i = 0; i < k; ++i) p(i, h.perm[j]) = rhs[i];
  }
  return p;
}

DenseMatrix selection_interpolation(const DenseMatrix& b, const std::vector<std::size_t>& selected) {
  const std::size_t k = selected.size();
  const DenseMatrix c = b.columns(selected);
  detail::HouseholderQr h = detail::householder_qr(c, k, false);
  DenseMatrix coeffs = b;
  detail::apply_qt(h, coeffs);
  DenseMatrix p(k, b.cols());
  std::vector<double> rhs(k);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < k; ++i) rhs[i] = coeffs(i, j);
    detail::solve_upper(h.packed, k, rhs);
    for (std::size_t i = 0; i < k; ++i) p(i, j) = rhs[i];
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t r = 0; r < k; ++r) p(r, selected[i]) = r == i ? 1.0 : 0.0;
  }
  return p;
}

void strengthen(const DenseMatrix& b, IDResult& result, double entry_limit) {
  const std::size_t n = b.cols();
  const std::size_t max_swaps = n * n;
  for (std::size_t swaps = 0; swaps < max_swaps; ++swaps) {
    std::vector<bool> chosen(n, false);
    for (std::size_t s : result.selected) chosen[s] = true;
    double worst = entry_limit;
    std::size_t wi = 0;
    std::size_t wj = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (chosen[j]) continue;
      for (std::size_t i = 0; i < result.k(); ++i) {
        if (std::abs(result.p(i, j)) > worst) {
          worst = std::abs(result.p(i, j));
          wi = i;
          wj = j;
        }
      }
    }
    if (wj == n) return;
    // Replacing selected column wi by column wj scales |det| of the selected
    // block by |P(wi, wj)| > entry_limit, so this cannot cycle.
    result.selected[wi] = wj;
    result.p = selection_interpolation(b, result.selected);
  }
}

}  // namespace

IDResult id_from_selection(const DenseMatrix& b, std::vector<std::size_t> selected) {
  require_rank(b, selected.size());
  IDResult out;
  out.p = selection_interpolation(b, selected);
  out.selected = std::move(selected);
  out.certificate = check_certificate(b, out);
  return out;
}

IDResult id_fixed_rank(const DenseMatrix& b, std::size_t k, const IDOptions& options) {
  require_rank(b, k);
  const detail::HouseholderQr h = detail::householder_qr(b, k, true);
  IDResult out;
  out.selected.assign(h.perm.begin(), h.perm.begin() + static_cast<std::ptrdiff_t>(k));
  out.p = interpolation_from_qr(h, k);
  if (options.strengthen) strengthen(b, out, options.entry_limit);
  if (options.certify) out.certificate = check_certificate(b, out);
  return out;
}

IDResult id_fixed_precision(const DenseMatrix& b, double eps, const IDOptions& options) {
  if (!(eps > 0.0)) throw ContractViolation("ID precision eps must be > 0");
  const std::size_t limit = std::min(b.rows(), b.cols());
  if (limit == 0) throw ContractViolation("ID of an empty matrix");
  const detail::HouseholderQr h = detail::householder_qr(b, limit, true);
  // |R[k,k]| <= ||R22||_2, so no k below the first small diagonal can succeed.
  std::size_t k = 1;
  while (k < limit && std::abs(h.packed(k, k)) > eps) ++k;
  const CertificateChecker checker(b);
  while (true) {
    IDResult out;
    out.selected.assign(h.perm.begin(), h.perm.begin() + static_cast<std::ptrdiff_t>(k));
    out.p = interpolation_from_qr(h, k);
    if (options.strengthen) strengthen(b, out, options.entry_limit);
    out.certificate = checker.check(out);
    if (out.certificate.achieved_error <= eps || k == limit) return out;
    ++k;
  }
}

CertificateChecker::CertificateChecker(const DenseMatrix& b) : b_(b) {
  if (std::min(b.rows(), b.cols()) <= kExactSigmaLimit) {
    sigma_ = singular_values(b);
    b_norm_ = sigma_.empty() ? 0.0 : sigma_.front();
  } else {
    b_norm_ = spectral_norm(b);
  }
}

IDCertificate CertificateChecker::check(const IDResult& result) const {
  const std::size_t m = b_.rows();
  const std::size_t n = b_.cols();
  const std::size_t k = result.k();
  if (result.p.rows() != k || result.p.cols() != n) {
    throw ContractViolation("interpolation matrix " + shape_string(result.p) + " does not match k = " +
                            std::to_string(k) + " and n = " + std::to_string(n));
  }
  std::vector<bool> seen(n, false);
  for (std::size_t s : result.selected) {
    if (s >= n) {
      throw ContractViolation("selected column " + std::to_string(s) + " out of range [0, " +
                              std::to_string(n) + ")");
    }
    if (seen[s]) throw ContractViolation("selected column " + std::to_string(s) + " repeated");
    seen[s] = true;
  }

  IDCertificate c;
  c.b_norm = b_norm_;
  c.identity_condition_met = true;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t r = 0; r < k; ++r) {
      if (result.p(r, result.selected[i]) != (r == i ? 1.0 : 0.0)) c.identity_condition_met = false;
    }
  }
  c.max_abs_entry = result.p.max_abs();
  const std::vector<double> p_sigma = singular_values(result.p);
  c.p_spectral_norm = p_sigma.front();
  c.p_min_singular = p_sigma.back();

  DenseMatrix residual = b_;
  residual -= matmul(b_.columns(result.selected), result.p);
  c.achieved_error = spectral_norm(residual);

  c.exact_case = (k == m || k == n);
  c.growth = std::sqrt(4.0 * static_cast<double>(k) * static_cast<double>(n - k) + 1.0);
  if (c.exact_case) {
    c.sigma_next = 0.0;
  } else if (!sigma_.empty()) {
    c.sigma_next = sigma_[k];
  } else {
    c.sigma_next = c.achieved_error;
    c.sigma_is_estimate = true;
  }
  c.bound = c.growth * c.sigma_next;
  c.roundoff_allowance =
      10.0 * static_cast<double>(std::max(m, n)) * kEps * b_norm_ * (1.0 + c.p_spectral_norm);

  c.entry_condition_met = c.max_abs_entry <= 2.0;
  c.norm_condition_met = c.p_spectral_norm <= c.growth * (1.0 + 1e-10);
  c.singular_condition_met = c.p_min_singular >= 1.0 - 1e-10;
  c.error_condition_met = c.exact_case ? c.achieved_error <= 1e-12 * b_norm_
                                       : c.achieved_error <= c.bound + c.roundoff_allowance;
  return c;
}

IDCertificate check_certificate(const DenseMatrix& b, const IDResult& result) {
  return CertificateChecker(b).check(result);
}

}  // namespace raidkit
