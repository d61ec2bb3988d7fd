#include "simpletrack/projection.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "simpletrack/rng.hpp"

namespace simpletrack {

std::string to_string(ProjectionMethod m) {
  switch (m) {
    case ProjectionMethod::Gaussian: return "gaussian";
    case ProjectionMethod::SvdRandom: return "svd-random";
    case ProjectionMethod::SvdTopM: return "svd-top-m";
    case ProjectionMethod::Elad: return "elad";
  }
  return "unknown";
}

ProjectionMethod projection_method_from_string(const std::string& name) {
  if (name == "gaussian") return ProjectionMethod::Gaussian;
  if (name == "svd-random") return ProjectionMethod::SvdRandom;
  if (name == "svd-top-m") return ProjectionMethod::SvdTopM;
  if (name == "elad") return ProjectionMethod::Elad;
  throw ConfigError("unknown projection method: " + name);
}

namespace {

void check_m(int m, int n) {
  if (m < 1 || m > n) throw DomainError("projection: m must satisfy 1 <= m <= n");
}

}  // namespace

ProjectionMatrix gaussian_matrix(int m, int n, std::uint64_t seed) {
  check_m(m, n);
  Rng rng(seed);
  ProjectionMatrix out;
  out.method = ProjectionMethod::Gaussian;
  out.seed = seed;
  out.phi.resize(m, n);
  const double sigma = 1.0 / std::sqrt(static_cast<double>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) out.phi(i, j) = sigma * rng.gaussian();
  return out;
}

ProjectionMatrix svd_random_matrix(const Dictionary& dict, int m, std::uint64_t seed) {
  return svd_random_matrix(dict, svd(dict.atoms), m, seed);
}

ProjectionMatrix svd_random_matrix(const Dictionary& dict, const SvdResult& dec, int m,
                                   std::uint64_t seed) {
  const int n = dict.dim();
  check_m(m, n);

  // partial Fisher-Yates over column indices
  Rng rng(seed);
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < m; ++i) {
    const auto j = i + static_cast<int>(rng.next_index(static_cast<std::uint64_t>(n - i)));
    std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  }

  ProjectionMatrix out;
  out.method = ProjectionMethod::SvdRandom;
  out.seed = seed;
  out.source_dictionary_hash = dict.digest();
  out.phi.resize(m, n);
  for (int i = 0; i < m; ++i) out.phi.row(i) = dec.u.col(idx[static_cast<std::size_t>(i)]);
  return out;
}

ProjectionMatrix svd_topm_matrix(const Dictionary& dict, int m) {
  return svd_topm_matrix(dict, svd(dict.atoms), m);
}

ProjectionMatrix svd_topm_matrix(const Dictionary& dict, const SvdResult& dec, int m) {
  const int n = dict.dim();
  check_m(m, n);
  ProjectionMatrix out;
  out.method = ProjectionMethod::SvdTopM;
  out.source_dictionary_hash = dict.digest();
  out.phi = dec.u.leftCols(m).transpose();
  return out;
}

double mean_signal_power(const Matrix& phi, const Dictionary& dict) {
  if (phi.cols() != dict.atoms.rows())
    throw DimensionError("mean_signal_power: phi column count mismatch");
  const SvdResult dec = svd(dict.atoms);
  const Matrix pu = phi * dec.u;  // m x n
  double power = 0.0;
  for (Eigen::Index k = 0; k < dec.singular_values.size(); ++k) {
    const double s = dec.singular_values[k];
    power += s * s * pu.col(k).squaredNorm();
  }
  return power;
}

double mutual_coherence(const Matrix& a) {
  if (a.cols() < 2) throw DomainError("mutual_coherence: need at least 2 columns");
  Vector norms(a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    norms[j] = a.col(j).norm();
    if (norms[j] == 0.0) throw DomainError("mutual_coherence: zero column");
  }
  double best = 0.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i)
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      const double c = std::abs(a.col(i).dot(a.col(j))) / (norms[i] * norms[j]);
      best = std::max(best, c);
    }
  return std::min(best, 1.0);
}

ProjectionMatrix elad_optimize(const Dictionary& dict, int m, double t_threshold, double shrink,
                               int iterations, std::uint64_t seed) {
  const int n = dict.dim();
  const int d = dict.atom_count();
  check_m(m, n);
  if (shrink <= 0.0 || shrink >= 1.0) throw DomainError("elad_optimize: shrink must be in (0,1)");
  if (t_threshold <= 0.0 || t_threshold >= 1.0)
    throw DomainError("elad_optimize: t_threshold must be in (0,1)");

  // pseudo-inverse of D, shared by all least-squares recoveries
  const SvdResult ddec = svd(dict.atoms);
  const double smax = ddec.singular_values.size() > 0 ? ddec.singular_values[0] : 0.0;
  const double tol = 1e-12 * smax;
  int rank = 0;
  for (Eigen::Index k = 0; k < ddec.singular_values.size(); ++k)
    if (ddec.singular_values[k] > tol) ++rank;
  if (rank < m) throw NumericalError("elad_optimize: dictionary rank below m");
  Matrix pinv = Matrix::Zero(d, n);
  for (int k = 0; k < rank; ++k)
    pinv += (1.0 / ddec.singular_values[k]) * ddec.v.col(k) * ddec.u.col(k).transpose();

  ProjectionMatrix current = gaussian_matrix(m, n, seed);
  ProjectionMatrix best = current;
  best.method = ProjectionMethod::Elad;
  best.source_dictionary_hash = dict.digest();
  double best_mu = mutual_coherence(current.phi * dict.atoms);

  for (int iter = 0; iter < iterations; ++iter) {
    Matrix a = current.phi * dict.atoms;  // m x d
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double norm = a.col(j).norm();
      if (norm > 0.0) a.col(j) /= norm;
    }
    Matrix gram = a.transpose() * a;  // d x d
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        if (i != j && std::abs(gram(i, j)) >= t_threshold) gram(i, j) *= shrink;

    // rank-m square root of the (symmetrized) shrunk Gram
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (gram + gram.transpose()));
    if (es.info() != Eigen::Success) throw NumericalError("elad_optimize: eigendecomposition failed");
    Matrix root(m, d);
    for (int k = 0; k < m; ++k) {
      const Eigen::Index src = d - 1 - k;  // eigenvalues ascend in Eigen
      const double ev = std::max(es.eigenvalues()[src], 0.0);
      root.row(k) = std::sqrt(ev) * es.eigenvectors().col(src).transpose();
    }

    current.phi = root * pinv;
    const double mu = mutual_coherence(current.phi * dict.atoms);
    if (mu < best_mu) {
      best_mu = mu;
      best.phi = current.phi;
    }
  }
  return best;
}

}  // namespace simpletrack
