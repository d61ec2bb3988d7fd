#include "simpletrack/reconstruct.hpp"

#include <cmath>

namespace simpletrack {

namespace {

double objective(const Matrix& a, const Vector& y, const Vector& theta, double lambda) {
  return 0.5 * (y - a * theta).squaredNorm() + lambda * theta.lpNorm<1>();
}

// Monotone accelerated proximal-gradient pass for one lambda, stopped on the
// lasso KKT residual (rejected monotone steps must not read as convergence).
// Updates theta in place, returns iterations consumed; *hit_cap reports cap
// exhaustion.
int fista_stage(const Matrix& a, const Vector& y, double lambda, double step, double kkt_tol,
                Vector& theta, const SolverConfig& cfg, bool* hit_cap) {
  double obj = objective(a, y, theta, lambda);
  Vector yv = theta;
  Vector theta_prev = theta;
  double tk = 1.0;

  auto kkt_violation = [&](const Vector& s) {
    const Vector g = a.transpose() * (a * s - y);
    double viol = 0.0;
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      const double v = s[j] != 0.0 ? std::abs(g[j] + (s[j] > 0.0 ? lambda : -lambda))
                                   : std::max(std::abs(g[j]) - lambda, 0.0);
      viol = std::max(viol, v);
    }
    return viol;
  };

  int iter = 0;
  for (; iter < cfg.stage_max_iters; ++iter) {
    const Vector grad = a.transpose() * (a * yv - y);
    const Vector z = soft_threshold(yv - step * grad, step * lambda);
    const double objz = objective(a, y, z, lambda);

    theta_prev = theta;
    if (objz <= obj) {
      theta = z;
      obj = objz;
    }
    const double tk1 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    yv = theta + (tk / tk1) * (z - theta) + ((tk - 1.0) / tk1) * (theta - theta_prev);
    tk = tk1;

    if (iter % 8 == 7 && kkt_violation(theta) <= kkt_tol) {
      ++iter;
      break;
    }
  }
  if (iter >= cfg.stage_max_iters) *hit_cap = true;
  return iter;
}

}  // namespace

ReconstructionResult solve_l1(const SensingProblem& problem, const SolverConfig& config) {
  if (problem.phi.cols() != problem.psi.rows())
    throw DimensionError("solve_l1: phi/psi dimension mismatch");
  if (problem.y.size() != problem.phi.rows())
    throw DimensionError("solve_l1: y length does not match phi rows");
  if (problem.epsilon < 0.0) throw DomainError("solve_l1: negative epsilon");

  const Matrix a = problem.phi * problem.psi;  // m x d
  const Eigen::Index d = a.cols();

  ReconstructionResult result;
  result.theta_hat = Vector::Zero(d);

  const double lambda0 = (a.transpose() * problem.y).lpNorm<Eigen::Infinity>();
  const double target = problem.epsilon > 0.0 ? problem.epsilon : config.zero_eps_residual;

  if (lambda0 > 0.0) {
    const double big_l = gram_spectral_norm(a);
    const double step = 1.0 / (big_l * (1.0 + 1e-10));
    bool hit_cap = false;
    double lambda = lambda0;
    const double kkt_tol = config.stage_kkt_tol * lambda0;
    while (true) {
      result.iterations_used +=
          fista_stage(a, problem.y, lambda, step, kkt_tol, result.theta_hat, config, &hit_cap);
      const double residual = (problem.y - a * result.theta_hat).norm();
      if (residual <= target) break;
      if (problem.epsilon == 0.0 && lambda <= config.lambda_floor_ratio * lambda0) {
        hit_cap = true;  // floor reached before the residual target
        break;
      }
      if (lambda <= 1e-15 * lambda0) {  // epsilon below what the data admits
        hit_cap = true;
        break;
      }
      lambda *= config.lambda_factor;
    }
    result.converged = !hit_cap;
  } else {
    // A^T y = 0: theta = 0 is optimal for every lambda.
    result.converged = problem.y.norm() <= target;
  }

  result.x_hat = problem.psi * result.theta_hat;
  result.residual = (problem.y - problem.phi * result.x_hat).norm();
  return result;
}

}  // namespace simpletrack
