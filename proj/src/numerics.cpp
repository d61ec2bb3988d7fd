#include "simpletrack/numerics.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>

namespace simpletrack {

SvdResult svd(const Matrix& matrix) {
  if (!matrix.allFinite()) throw NumericalError("svd: matrix has non-finite entries");

  Eigen::JacobiSVD<Matrix> dec(matrix, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdResult out;
  out.u = dec.matrixU();
  out.v = dec.matrixV();
  out.singular_values = dec.singularValues();

  // Deterministic signs: make the largest-magnitude entry of each left
  // singular vector non-negative (first such entry on ties).
  const Eigen::Index k = out.u.cols();
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::Index imax = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < out.u.rows(); ++i) {
      const double a = std::abs(out.u(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (out.u(imax, j) < 0.0) {
      out.u.col(j) = -out.u.col(j);
      if (j < out.v.cols()) out.v.col(j) = -out.v.col(j);
    }
  }
  return out;
}

Matrix dct_basis(int n) {
  if (n < 1) throw DomainError("dct_basis: n must be >= 1");
  Matrix psi(n, n);
  const double c0 = std::sqrt(1.0 / n);
  const double ck = std::sqrt(2.0 / n);
  for (int k = 0; k < n; ++k) {
    const double scale = (k == 0) ? c0 : ck;
    for (int i = 0; i < n; ++i) {
      psi(i, k) = scale * std::cos(std::numbers::pi * (2.0 * i + 1.0) * k / (2.0 * n));
    }
  }
  return psi;
}

Vector soft_threshold(const Vector& v, double t) {
  if (t < 0.0) throw DomainError("soft_threshold: negative threshold");
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]) - t;
    out[i] = a > 0.0 ? (v[i] > 0.0 ? a : -a) : 0.0;
  }
  return out;
}

double gram_spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Vector v(m.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = std::sin(static_cast<double>(i) + 1.0);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vector w = m.transpose() * (m * v);
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    w /= norm;
    const double next = norm;
    const bool settled = std::abs(next - lambda) <= 1e-12 * std::max(1.0, next);
    lambda = next;
    v = w;
    if (settled && it > 4) break;
  }
  return lambda;
}

std::uint64_t matrix_digest(const Matrix& m) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  const std::int64_t rows = m.rows(), cols = m.cols();
  mix(&rows, sizeof rows);
  mix(&cols, sizeof cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      const double v = m(i, j);
      mix(&v, sizeof v);
    }
  return h;
}

}  // namespace simpletrack
