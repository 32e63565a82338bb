#pragma once

#include <cstddef>
#include <vector>

#include "raidkit/matrix.hpp"

namespace raidkit::detail {

// Packed Householder QR: R in the upper triangle of `packed`, reflector
// vectors (implicit unit head) below the diagonal, scalars in `tau`.
struct HouseholderQr {
  DenseMatrix packed;
  std::vector<double> tau;
  std::vector<std::size_t> perm;
  std::size_t steps = 0;
};

/// Runs at most max_steps reflections. With pivot=false perm is the identity.
HouseholderQr householder_qr(DenseMatrix a, std::size_t max_steps, bool pivot);

/// First `ncols` columns of H_0 ... H_{steps-1}.
DenseMatrix form_q(const HouseholderQr& qr, std::size_t ncols);

/// Rows [0, nrows) of R (zero below the diagonal), in pivot column order.
DenseMatrix extract_r(const HouseholderQr& qr, std::size_t nrows);

/// b <- H_{steps-1} ... H_0 b, i.e. Q_full^T b.
void apply_qt(const HouseholderQr& qr, DenseMatrix& b);

/// Solves U x = b in place for upper-triangular U (leading n x n block of u).
/// A zero pivot yields a zero component.
void solve_upper(const DenseMatrix& u, std::size_t n, std::span<double> b);
/// Solves U^T x = b in place.
void solve_upper_transposed(const DenseMatrix& u, std::size_t n, std::span<double> b);

}  // namespace raidkit::detail
