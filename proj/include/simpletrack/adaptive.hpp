#pragma once

#include <vector>

#include "simpletrack/core.hpp"
#include "simpletrack/projection.hpp"
#include "simpletrack/reconstruct.hpp"

namespace simpletrack {

struct TrainingPair {
  double speed_stat = 0.0;  // metres/second
  int min_projections = 1;
};

/// Trained epsilon-SVR with RBF kernel k(a,b) = exp(-gamma (a-b)^2).
struct SvrModel {
  std::vector<double> support_vectors;
  std::vector<double> dual_coefficients;
  double bias = 0.0;
  double kernel_gamma = 1.0;
  double c = 1.0;
  double epsilon_tube = 0.0;
};

struct LookupTable {
  struct Entry {
    double speed_ub = 0.0;  // upper bound of the speed bin, m/s
    int projections = 1;
  };
  std::vector<Entry> entries;  // speed bounds strictly increasing
  int m_max = 1;

  /// Total: any non-negative speed maps to some m in [1, m_max]. Queries
  /// above the last bound return m_max.
  int lookup(double speed) const;
};

struct MinProjResult {
  int m = 1;
  bool saturated = false;  // even m_max missed the tolerance
};

/// Smallest m whose first-m-rows decode of the segment has per-segment mean
/// distance error <= xi, by binary search over [1, m_max] plus a short
/// downward confirmation scan. Error in m is treated as approximately
/// monotone.
MinProjResult min_projections_for_error(const Segment& segment, const ProjectionMatrix& proj,
                                        const Dictionary& dict, double xi, int m_max);

double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys);

/// Solves the epsilon-SVR dual by pairwise working-set optimization until the
/// maximal KKT violation is <= 1e-4. Deterministic given input order.
SvrModel svr_train(const std::vector<TrainingPair>& pairs, double c, double gamma,
                   double epsilon_tube);

double svr_predict(const SvrModel& model, double speed_stat);

/// 5-fold cross-validated grid search over c in {1,10,100}, gamma in
/// {0.1,1,10}, epsilon-tube in {0.5,1,2}, minimizing RMSE in m.
SvrModel svr_train_cv(const std::vector<TrainingPair>& pairs, std::uint64_t seed);

LookupTable build_lookup_table(const SvrModel& model, double speed_min, double speed_max,
                               int bins, int m_max);

}  // namespace simpletrack
