#pragma once

// Interpolative decompositions B ~= C P, where C = B[:, selected] and P is a
// k x n interpolation matrix containing the k x k identity at the selected
// columns.
//
// Construction is greedy column-pivoted QR: with B Pi = Q [R11 R12; 0 R22],
// P Pi = [I | R11^{-1} R12] and ||B - C P||_2 = ||R22||_2. This meets the
// usual stability targets (|P_ij| <= 2, ||P||_2 <= sqrt(4k(n-k)+1),
// ||B - CP||_2 <= sqrt(4k(n-k)+1) sigma_{k+1}) on almost all inputs but not
// provably; the certificate records whether each one held. An optional swap
// pass enforces the entry bound.

#include <cstddef>
#include <optional>
#include <vector>

#include "raidkit/matrix.hpp"

namespace raidkit {

struct IDCertificate {
  double max_abs_entry = 0.0;
  double p_spectral_norm = 0.0;
  double p_min_singular = 0.0;
  double achieved_error = 0.0;      // ||B - C P||_2
  double sigma_next = 0.0;          // sigma_{k+1}(B); 0 when k = min(m, n)
  bool sigma_is_estimate = false;   // above kExactSigmaLimit: power estimate of ||B - CP||_2
  double growth = 0.0;              // sqrt(4 k (n - k) + 1)
  double bound = 0.0;               // growth * sigma_next
  double roundoff_allowance = 0.0;  // additive slack on the error bound test
  double b_norm = 0.0;              // ||B||_2

  bool identity_condition_met = false;  // P[:, selected] is exactly I_k
  bool entry_condition_met = false;     // max |P_ij| <= 2
  bool norm_condition_met = false;      // ||P||_2 <= growth
  bool singular_condition_met = false;  // sigma_min(P) >= 1 - 1e-10
  bool exact_case = false;              // k == m or k == n
  bool error_condition_met = false;     // see below

  // exact_case: achieved_error <= 1e-12 ||B||_2.
  // otherwise:  achieved_error <= bound + roundoff_allowance.
};

struct IDResult {
  std::vector<std::size_t> selected;  // 0-based column indices of B, pivot order
  DenseMatrix p;                      // k x n
  IDCertificate certificate;

  std::size_t k() const noexcept { return selected.size(); }
};

struct IDOptions {
  // Swap selected/unselected columns until max |P_ij| <= entry_limit, at most
  // n^2 swaps.
  bool strengthen = false;
  double entry_limit = 2.0;
  // Fill in the certificate (costs an SVD of B). Callers checking many ranks
  // of one B should turn this off and use CertificateChecker.
  bool certify = true;
};

constexpr std::size_t kExactSigmaLimit = 2048;

IDResult id_fixed_rank(const DenseMatrix& b, std::size_t k, const IDOptions& options = {});

/// Smallest k with ||B - C P||_2 <= eps (k >= 1), else k = min(m, n).
IDResult id_fixed_precision(const DenseMatrix& b, double eps, const IDOptions& options = {});

/// Recomputes every certificate field from B, the selection and P alone.
IDCertificate check_certificate(const DenseMatrix& b, const IDResult& result);

/// The ID with a given selection: P = C^+ B with the identity columns set exactly.
IDResult id_from_selection(const DenseMatrix& b, std::vector<std::size_t> selected);

/// Reuses the singular values of one B across many certificate checks.
class CertificateChecker {
 public:
  explicit CertificateChecker(const DenseMatrix& b);
  IDCertificate check(const IDResult& result) const;

 private:
  const DenseMatrix& b_;
  std::vector<double> sigma_;  // empty when min(m, n) > kExactSigmaLimit
  double b_norm_ = 0.0;
};

}  // namespace raidkit
