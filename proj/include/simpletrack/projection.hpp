#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "simpletrack/dictionary.hpp"
#include "simpletrack/numerics.hpp"

namespace simpletrack {

enum class ProjectionMethod { Gaussian, SvdRandom, SvdTopM, Elad };

std::string to_string(ProjectionMethod m);
ProjectionMethod projection_method_from_string(const std::string& name);

struct ProjectionMatrix {
  Matrix phi;  // m_max x n
  ProjectionMethod method = ProjectionMethod::Gaussian;
  std::optional<std::uint64_t> seed;
  std::uint64_t source_dictionary_hash = 0;  // 0 when no dictionary is involved

  int m_max() const { return static_cast<int>(phi.rows()); }
  int dim() const { return static_cast<int>(phi.cols()); }
};

/// i.i.d. Gaussian entries, mean 0, variance 1/m, from the seeded generator.
ProjectionMatrix gaussian_matrix(int m, int n, std::uint64_t seed);

/// Transposed selection of m columns of U (from svd(D)) chosen uniformly
/// without replacement by the seeded generator.
ProjectionMatrix svd_random_matrix(const Dictionary& dict, int m, std::uint64_t seed);

/// Transposed left-most m columns of U, singular values non-increasing.
/// Fully deterministic; no seed.
ProjectionMatrix svd_topm_matrix(const Dictionary& dict, int m);

// Variants taking a precomputed svd(dict.atoms), for callers that build many
// matrices from one dictionary.
ProjectionMatrix svd_random_matrix(const Dictionary& dict, const SvdResult& dec, int m,
                                   std::uint64_t seed);
ProjectionMatrix svd_topm_matrix(const Dictionary& dict, const SvdResult& dec, int m);

/// trace(Phi U Lambda^2 U^T Phi^T) computed from svd(D): the mean measurement
/// energy E[y^T y] under E[s s^T] = I.
double mean_signal_power(const Matrix& phi, const Dictionary& dict);

/// Largest normalized inner product over distinct column pairs, in [0, 1].
double mutual_coherence(const Matrix& a);

/// Iterative Gram-shrinkage starting from a seeded Gaussian matrix: normalize
/// the columns of Phi*D, shrink large off-diagonal Gram entries, reduce the
/// Gram to rank m, and recover Phi by least squares against D. Returns the
/// iterate (including the initial one) with the lowest mutual_coherence(Phi*D).
ProjectionMatrix elad_optimize(const Dictionary& dict, int m, double t_threshold, double shrink,
                               int iterations, std::uint64_t seed);

}  // namespace simpletrack
