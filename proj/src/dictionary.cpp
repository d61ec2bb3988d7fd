#include "simpletrack/dictionary.hpp"

#include <algorithm>
#include <cmath>

#include "simpletrack/rng.hpp"

namespace simpletrack {

namespace {

Matrix init_atoms(const std::vector<Vector>& samples, int d, Rng& rng) {
  const Eigen::Index n = samples.front().size();
  Matrix atoms(n, d);
  std::vector<bool> used(samples.size(), false);
  int filled = 0;
  // distinct non-zero training samples first, scaled to unit norm
  for (int attempt = 0; attempt < 64 * d && filled < d; ++attempt) {
    const std::size_t idx = rng.next_index(samples.size());
    if (used[idx]) continue;
    const double norm = samples[idx].norm();
    if (norm == 0.0) {
      used[idx] = true;
      continue;
    }
    used[idx] = true;
    atoms.col(filled++) = samples[idx] / norm;
  }
  // fallback: unit random directions
  while (filled < d) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.gaussian();
    const double norm = v.norm();
    if (norm == 0.0) continue;
    atoms.col(filled++) = v / norm;
  }
  return atoms;
}

}  // namespace

double lasso_objective(const Vector& x, const Matrix& atoms, const Vector& s, double lambda) {
  return 0.5 * (x - atoms * s).squaredNorm() + lambda * s.lpNorm<1>();
}

SparseCode sparse_code(const Vector& x, const Dictionary& dict, double lambda,
                       const Vector* warm_start, double big_l_hint) {
  if (lambda < 0.0) throw DomainError("sparse_code: negative lambda");
  if (x.size() != dict.atoms.rows()) throw DimensionError("sparse_code: sample length mismatch");
  const Eigen::Index d = dict.atoms.cols();

  const double big_l = big_l_hint > 0.0 ? big_l_hint : gram_spectral_norm(dict.atoms);
  SparseCode out;
  if (big_l == 0.0) {
    out.coefficients = Vector::Zero(d);
    out.residual_norm = x.norm();
    return out;
  }
  const double step = 1.0 / (big_l * (1.0 + 1e-10));

  // Monotone FISTA, stopped on the lasso KKT residual so rejected steps do
  // not read as convergence.
  Vector xk = warm_start != nullptr && warm_start->size() == d ? *warm_start : Vector::Zero(d);
  double obj = lasso_objective(x, dict.atoms, xk, lambda);
  Vector y = xk;
  Vector x_prev = xk;
  double tk = 1.0;

  const double scale = std::max(1.0, (dict.atoms.transpose() * x).lpNorm<Eigen::Infinity>());
  const double kkt_tol = 1e-9 * scale;
  auto kkt_violation = [&](const Vector& s) {
    const Vector g = dict.atoms.transpose() * (dict.atoms * s - x);
    double viol = 0.0;
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      const double v = s[j] != 0.0 ? std::abs(g[j] + (s[j] > 0.0 ? lambda : -lambda))
                                   : std::max(std::abs(g[j]) - lambda, 0.0);
      viol = std::max(viol, v);
    }
    return viol;
  };

  constexpr int kMaxIters = 10000;
  for (int iter = 0; iter < kMaxIters; ++iter) {
    const Vector grad = dict.atoms.transpose() * (dict.atoms * y - x);
    const Vector z = soft_threshold(y - step * grad, step * lambda);
    const double objz = lasso_objective(x, dict.atoms, z, lambda);

    x_prev = xk;
    if (objz <= obj) {
      xk = z;
      obj = objz;
    }
    const double tk1 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    y = xk + (tk / tk1) * (z - xk) + ((tk - 1.0) / tk1) * (xk - x_prev);
    tk = tk1;

    if (iter % 8 == 7 && kkt_violation(xk) <= kkt_tol) break;
  }

  out.coefficients = std::move(xk);
  out.residual_norm = (x - dict.atoms * out.coefficients).norm();
  return out;
}

Dictionary dictionary_update(const std::vector<SparseCode>& codes,
                             const std::vector<Vector>& samples, const Dictionary& dict) {
  if (codes.empty() || samples.empty()) throw DomainError("dictionary_update: empty training set");
  if (codes.size() != samples.size())
    throw DimensionError("dictionary_update: codes/samples length mismatch");

  const Eigen::Index n = dict.atoms.rows();
  const Eigen::Index d = dict.atoms.cols();
  const Eigen::Index p = static_cast<Eigen::Index>(samples.size());

  Matrix s_mat(d, p), x_mat(n, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    s_mat.col(i) = codes[static_cast<std::size_t>(i)].coefficients;
    x_mat.col(i) = samples[static_cast<std::size_t>(i)];
  }
  const Matrix gram = s_mat * s_mat.transpose();  // d x d
  const Matrix w = x_mat * s_mat.transpose();     // n x d

  Dictionary out = dict;
  for (Eigen::Index j = 0; j < d; ++j) {
    const double usage = gram(j, j);
    if (usage <= 0.0) continue;  // unused atom stays put
    Vector u = out.atoms.col(j) + (w.col(j) - out.atoms * gram.col(j)) / usage;
    const double norm = u.norm();
    if (norm > 1.0) u /= norm;
    out.atoms.col(j) = u;
  }
  return out;
}

Dictionary learn_dictionary(const std::vector<Vector>& samples, int d, double lambda,
                            int iterations, std::uint64_t seed) {
  if (samples.empty()) throw DomainError("learn_dictionary: no samples");
  if (d < 1) throw DomainError("learn_dictionary: d must be >= 1");
  if (iterations < 1) throw DomainError("learn_dictionary: iterations must be >= 1");
  const Eigen::Index n = samples.front().size();
  for (const Vector& x : samples)
    if (x.size() != n) throw DimensionError("learn_dictionary: inconsistent sample lengths");

  Rng rng(seed);
  Dictionary dict;
  dict.atoms = init_atoms(samples, d, rng);
  dict.lambda = lambda;
  dict.seed = seed;

  std::vector<SparseCode> codes(samples.size());
  for (int round = 0; round < iterations; ++round) {
    const double big_l = gram_spectral_norm(dict.atoms);
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const Vector* warm = round > 0 ? &codes[i].coefficients : nullptr;
      codes[i] = sparse_code(samples[i], dict, lambda, warm, big_l);
    }
    dict = dictionary_update(codes, samples, dict);
    double objective = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i)
      objective += lasso_objective(samples[i], dict.atoms, codes[i].coefficients, lambda);
    dict.train_objective_history.push_back(objective);
  }
  return dict;
}

double default_lambda(const std::vector<Vector>& samples, int d, std::uint64_t seed) {
  if (samples.empty()) throw DomainError("default_lambda: no samples");
  Rng rng(seed);
  const Matrix atoms = init_atoms(samples, d, rng);
  std::vector<double> maxcorr;
  maxcorr.reserve(samples.size());
  for (const Vector& x : samples)
    maxcorr.push_back((atoms.transpose() * x).lpNorm<Eigen::Infinity>());
  std::sort(maxcorr.begin(), maxcorr.end());
  const std::size_t mid = maxcorr.size() / 2;
  const double median = (maxcorr.size() % 2 == 1) ? maxcorr[mid]
                                                  : 0.5 * (maxcorr[mid - 1] + maxcorr[mid]);
  return 0.1 * median;
}

}  // namespace simpletrack
