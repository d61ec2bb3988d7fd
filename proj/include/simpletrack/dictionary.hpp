#pragma once

#include <cstdint>
#include <vector>

#include "simpletrack/numerics.hpp"

namespace simpletrack {

/// Learnt sparsifying dictionary. Atoms are columns of `atoms` (n x d) with
/// squared norm at most 1.
struct Dictionary {
  Matrix atoms;
  double lambda = 0.0;  // sparsity weight used during training
  std::uint64_t seed = 0;
  std::vector<double> train_objective_history;

  int dim() const { return static_cast<int>(atoms.rows()); }
  int atom_count() const { return static_cast<int>(atoms.cols()); }
  std::uint64_t digest() const { return matrix_digest(atoms); }
};

struct SparseCode {
  Vector coefficients;
  double residual_norm = 0.0;
};

/// Lasso value 0.5 * ||x - D s||^2 + lambda * ||s||_1.
double lasso_objective(const Vector& x, const Matrix& atoms, const Vector& s, double lambda);

/// Minimizes 0.5*||x - D s||^2 + lambda*||s||_1 by accelerated
/// proximal-gradient iteration with step 1/L, L = ||D^T D||_2. `warm_start`
/// (optional) seeds the iteration; the returned code never has a worse
/// objective than the warm start.
/// `big_l_hint`, when positive, is taken as a precomputed L so batch callers
/// can avoid re-running the power iteration per sample.
SparseCode sparse_code(const Vector& x, const Dictionary& dict, double lambda,
                       const Vector* warm_start = nullptr, double big_l_hint = 0.0);

/// One full pass of block-coordinate descent over atoms for fixed codes,
/// each atom updated in closed form then projected onto the unit ball.
/// Atoms with zero usage are left unchanged. Never increases the objective.
Dictionary dictionary_update(const std::vector<SparseCode>& codes,
                             const std::vector<Vector>& samples, const Dictionary& dict);

/// Alternating minimization: sparse codes for all samples, then a dictionary
/// pass, for `iterations` rounds. Initial atoms are distinct training samples
/// drawn by the seeded generator and normalized (random unit directions when
/// the samples run out). Deterministic per (samples, d, lambda, iterations,
/// seed).
Dictionary learn_dictionary(const std::vector<Vector>& samples, int d, double lambda,
                            int iterations, std::uint64_t seed);

/// Scale-aware default sparsity weight:
/// 0.1 * median over samples of ||D0^T x||_inf at the seeded initialization.
double default_lambda(const std::vector<Vector>& samples, int d, std::uint64_t seed);

}  // namespace simpletrack
