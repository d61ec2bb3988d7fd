#pragma once

#include "simpletrack/numerics.hpp"

namespace simpletrack {

/// min ||theta||_1 subject to ||y - Phi Psi theta||_2 <= epsilon.
struct SensingProblem {
  Vector y;       // length m
  Matrix phi;     // m x n
  Matrix psi;     // n x d
  double epsilon = 0.0;
};

struct SolverConfig {
  double lambda_factor = 0.5;        // geometric continuation factor
  double stage_kkt_tol = 1e-9;       // per-stage KKT residual, relative to lambda_0
  int stage_max_iters = 20000;
  double lambda_floor_ratio = 1e-12; // stop for epsilon = 0
  double zero_eps_residual = 1e-8;   // target residual for epsilon = 0
};

struct ReconstructionResult {
  Vector theta_hat;
  Vector x_hat;          // psi * theta_hat
  double residual = 0.0; // ||y - phi * x_hat||_2
  int iterations_used = 0;
  bool converged = true; // false when a stage exhausted its iteration cap
};

/// Solves the constrained problem through its Lagrangian (lasso) form with
/// accelerated proximal-gradient stages and lambda-continuation from
/// lambda_0 = ||A^T y||_inf, stopping at the largest lambda whose solution
/// meets the residual bound.
ReconstructionResult solve_l1(const SensingProblem& problem, const SolverConfig& config = {});

}  // namespace simpletrack
