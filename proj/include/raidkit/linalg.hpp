#pragma once

// Dense factorizations and the derived operations everything else builds on.
//
// Rank cutoffs: when a rank_tol is not given, max(rows, cols) * machine epsilon
// is used. Pivoted QR treats |R[i,i]| <= rank_tol * |R[0,0]| as zero; SVD based
// routines treat sigma_i <= rank_tol * sigma_1 as zero.

#include <cstddef>
#include <optional>
#include <vector>

#include "raidkit/matrix.hpp"

namespace raidkit {

enum class NormKind { spectral, frobenius };

double default_rank_tol(std::size_t rows, std::size_t cols);

/// A[:, perm[j]] = (Q R)[:, j] for the retained rank; that is A = Q R Pi.
struct PivotedQRFactors {
  DenseMatrix q;                  // m x rank, orthonormal columns
  DenseMatrix r_factor;           // rank x n, upper trapezoidal, columns in pivot order
  std::vector<std::size_t> perm;  // perm[j] is the original column placed at position j
  std::size_t rank = 0;
};

/// Thin SVD M = U diag(sigma) V^T with min(m, n) singular triplets.
struct SVDFactors {
  DenseMatrix u;
  std::vector<double> sigma;  // nonincreasing, nonnegative
  DenseMatrix v;
};

/// S = (A^T A)^{-1/2} A^T held as S = V_r U_r^T, never as an n x m product
/// unless materialize() is called.
class WhiteningOperator {
 public:
  static constexpr std::size_t kMaterializeLimit = 2048;

  WhiteningOperator(DenseMatrix v_r, DenseMatrix u_r, std::vector<double> sigma_r);

  const DenseMatrix& v_r() const noexcept { return v_r_; }
  const DenseMatrix& u_r() const noexcept { return u_r_; }
  const std::vector<double>& sigma_r() const noexcept { return sigma_r_; }
  std::size_t rank() const noexcept { return sigma_r_.size(); }

  /// S * b, an n x p matrix.
  DenseMatrix apply(const DenseMatrix& b) const;
  /// S^T * y, an m x p matrix.
  DenseMatrix apply_adjoint(const DenseMatrix& y) const;
  /// U_r^T * b: the coordinates of S b in the basis V_r.
  DenseMatrix reduced(const DenseMatrix& b) const;
  /// (A^T A)^{-1/2} * w for w in R^{n x p}.
  DenseMatrix inverse_sqrt_gram(const DenseMatrix& w) const;
  /// Explicit n x m matrix; refused when m exceeds kMaterializeLimit.
  DenseMatrix materialize() const;

 private:
  DenseMatrix v_r_;
  DenseMatrix u_r_;
  std::vector<double> sigma_r_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// a^T * b
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
/// a * b^T
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

struct SpectralNormOptions {
  double tol = 1e-8;
  std::size_t max_iterations = 5000;
  // At or below this min(rows, cols) the norm comes from a full SVD.
  std::size_t svd_threshold = 256;
};

double spectral_norm(const DenseMatrix& m, double tol = 1e-8);
double spectral_norm(const DenseMatrix& m, const SpectralNormOptions& options);
/// Power iteration on the smaller Gram matrix, started from the normalized
/// all-ones vector. Throws NumericalError at the iteration cap.
double spectral_norm_power(const DenseMatrix& m, double tol = 1e-8,
                           std::size_t max_iterations = 5000);
double matrix_norm(const DenseMatrix& m, NormKind kind);

/// ||A D|| in the selected norm.
double seminorm_A(const DenseMatrix& a, const DenseMatrix& d, NormKind norm);

/// Householder QR with greedy (Businger-Golub) column pivoting. Equal
/// residual column norms are broken toward the lowest original index.
PivotedQRFactors pivoted_qr(const DenseMatrix& a, std::optional<double> rank_tol = std::nullopt);

/// Thin SVD by pivoted-QR preconditioned one-sided Jacobi.
SVDFactors svd(const DenseMatrix& m);
/// Singular values only (skips accumulating U and V).
std::vector<double> singular_values(const DenseMatrix& m);

DenseMatrix pseudoinverse(const DenseMatrix& m, std::optional<double> rank_tol = std::nullopt);

/// Minimum-norm least-squares solution X = A^+ B, via pivoted QR and a
/// complete orthogonal decomposition when A is rank deficient.
DenseMatrix least_squares_solve(const DenseMatrix& a, const DenseMatrix& b,
                                std::optional<double> rank_tol = std::nullopt);
DenseMatrix least_squares_solve(const PivotedQRFactors& qr, const DenseMatrix& b);

/// Pi^{-1} R^+ W for the retained R of a pivoted QR: the minimum-norm z with
/// R Pi z = W. Solved by triangular substitution, never by an explicit inverse.
DenseMatrix apply_r_pinv(const PivotedQRFactors& qr, const DenseMatrix& w);

WhiteningOperator whitening_operator(const DenseMatrix& a,
                                     std::optional<double> rank_tol = std::nullopt);

}  // namespace raidkit
