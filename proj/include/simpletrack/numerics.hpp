#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

#include "simpletrack/errors.hpp"

namespace simpletrack {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Full SVD of an n x d matrix: u is n x n, v is d x d, both orthonormal,
/// singular values sorted non-increasing.
struct SvdResult {
  Matrix u;
  Vector singular_values;
  Matrix v;
};

/// Full SVD with a deterministic sign convention: in each left singular
/// vector the entry of largest magnitude (first such entry on ties) is made
/// non-negative, flipping the matching right singular vector when needed.
SvdResult svd(const Matrix& matrix);

/// Orthonormal type-II DCT synthesis basis (n x n). Column k at row i is
/// c_k * cos(pi * (2i+1) * k / (2n)), c_0 = sqrt(1/n), c_k = sqrt(2/n).
Matrix dct_basis(int n);

/// Elementwise sign(v_i) * max(|v_i| - t, 0).
Vector soft_threshold(const Vector& v, double t);

/// Largest eigenvalue of mᵀm estimated by power iteration (squared operator
/// norm of m). Used for proximal-gradient step sizes.
double gram_spectral_norm(const Matrix& m);

/// FNV-1a digest over the row-major entry bytes; identifies matrices in
/// serialized models.
std::uint64_t matrix_digest(const Matrix& m);

}  // namespace simpletrack
