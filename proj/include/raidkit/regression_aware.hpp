#pragma once

// Regression-aware decompositions of B for a design matrix A.
//
// The ID or SVD is taken of B as seen through the regression min ||A X - B||:
// either Q^T B, with Q the orthonormal factor of a pivoted QR of A (method qr),
// or S B with S = (A^T A)^{-1/2} A^T (method whitened). Because A A^+ = Q Q^T =
// S^T S and Q, S^T are isometries on range(A),
//
//   ||A X - A Y P|| = ||Q^T B - Q^T C P|| = ||S B - S C P||,
//
// with X = A^+ B and Y = A^+ C, so every error below is computed in the small
// projected space and X is never formed.

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "raidkit/interp_decomp.hpp"
#include "raidkit/linalg.hpp"
#include "raidkit/matrix.hpp"

namespace raidkit {

enum class Method { qr, whitened };

std::string_view method_name(Method method);
Method parse_method(std::string_view name);

struct RAIDResult {
  IDResult id;             // ID of the projected B; indices are columns of B
  DenseMatrix y;           // A^+ C for the selected columns C
  double raid_error = 0.0;            // ||proj(B) - proj(C) P||_2
  double raid_error_frobenius = 0.0;
  double min_residual = 0.0;          // min_X ||A X - B||_2
  double min_residual_frobenius = 0.0;
  std::size_t design_rank = 0;
  Method method = Method::qr;
  bool solution_space = false;  // error measured as ||X - Y P||_2 instead
};

struct RAPCAResult {
  DenseMatrix t;  // n_A x k, with A T having orthonormal columns
  std::vector<double> sigma;  // k leading singular values of proj(B)
  DenseMatrix u;  // k leading left singular vectors of proj(B)
  DenseMatrix v;  // nb x k right singular vectors
  double rapca_error = 0.0;  // sigma_{k+1}(proj(B)), 0 past its rank
  std::vector<double> projected_spectrum;  // every singular value of proj(B)
  std::size_t design_rank = 0;
  Method method = Method::qr;
};

struct CCASpectrum {
  std::vector<double> sigma;  // clamped to [0, 1], nonincreasing
  double max_unclamped = 0.0;
};

RAIDResult raid(const DenseMatrix& a, const DenseMatrix& b, std::size_t k,
                Method method = Method::qr, std::optional<double> rank_tol = std::nullopt,
                const IDOptions& id_options = {});

/// Smallest k whose regression-aware error is at most eps.
RAIDResult raid_fixed_precision(const DenseMatrix& a, const DenseMatrix& b, double eps,
                                Method method = Method::qr,
                                std::optional<double> rank_tol = std::nullopt,
                                const IDOptions& id_options = {});

/// ID of X = A^+ B with the error ||X - Y P||_2 measured on the solutions.
/// Sensitive to the conditioning of A; kept for comparison with raid().
RAIDResult raid_solution_space(const DenseMatrix& a, const DenseMatrix& b, std::size_t k,
                               std::optional<double> rank_tol = std::nullopt);

RAPCAResult rapca(const DenseMatrix& a, const DenseMatrix& b, std::size_t k,
                  Method method = Method::qr, std::optional<double> rank_tol = std::nullopt);

/// Singular values of Q_A^T Q_B: cosines of the principal angles.
CCASpectrum cca_spectrum(const DenseMatrix& a, const DenseMatrix& b,
                         std::optional<double> rank_tol = std::nullopt);

/// Singular values of Q_A^T B.
std::vector<double> rapca_spectrum(const DenseMatrix& a, const DenseMatrix& b,
                                   std::optional<double> rank_tol = std::nullopt);

}  // namespace raidkit
