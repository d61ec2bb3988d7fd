#include "simpletrack/adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "simpletrack/rng.hpp"

namespace simpletrack {

namespace {

double rbf(double a, double b, double gamma) {
  const double d = a - b;
  return std::exp(-gamma * d * d);
}

// Mean distance error of decoding one segment from its first-m-rows
// projection, both coordinates. The probe tolerances are loose relative to
// the metre-scale xi threshold; tighter settings only cost solver time.
double decode_error(const Segment& seg, const ProjectionMatrix& proj, const Dictionary& dict,
                    int m) {
  const Matrix phi = proj.phi.topRows(m);
  SolverConfig probe_cfg;
  probe_cfg.stage_kkt_tol = 1e-6;
  auto recon = [&](const Vector& x) {
    SensingProblem p;
    p.phi = phi;
    p.psi = dict.atoms;
    p.y = phi * x;
    p.epsilon = 1e-3 * p.y.norm();
    return solve_l1(p, probe_cfg).x_hat;
  };
  const Vector e_hat = recon(seg.easting_vec);
  const Vector n_hat = recon(seg.northing_vec);
  double total = 0.0;
  for (Eigen::Index i = 0; i < e_hat.size(); ++i)
    total += std::hypot(seg.easting_vec[i] - e_hat[i], seg.northing_vec[i] - n_hat[i]);
  return total / static_cast<double>(e_hat.size());
}

}  // namespace

int LookupTable::lookup(double speed) const {
  for (const Entry& e : entries)
    if (speed <= e.speed_ub) return e.projections;
  return m_max;
}

MinProjResult min_projections_for_error(const Segment& segment, const ProjectionMatrix& proj,
                                        const Dictionary& dict, double xi, int m_max) {
  if (xi <= 0.0) throw DomainError("min_projections_for_error: xi must be positive");
  if (m_max < 1 || m_max > proj.m_max())
    throw DomainError("min_projections_for_error: m_max out of range");

  std::map<int, double> cache;
  auto err = [&](int m) {
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    const double e = decode_error(segment, proj, dict, m);
    cache[m] = e;
    return e;
  };

  if (err(m_max) > xi) return {m_max, true};

  // binary search for the first m meeting the tolerance (approx. monotone)
  int lo = 1, hi = m_max;
  while (lo < hi) {
    const int mid = lo + (hi - lo) / 2;
    if (err(mid) <= xi)
      hi = mid;
    else
      lo = mid + 1;
  }
  // short downward confirmation scan against mild non-monotonicity
  int best = lo;
  for (int step = 1; step <= 3 && best - 1 >= 1; ++step) {
    if (err(best - 1) <= xi)
      --best;
    else
      break;
  }
  return {best, false};
}

double pearson_correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw DimensionError("pearson_correlation: length mismatch");
  if (xs.size() < 2) throw DomainError("pearson_correlation: need at least 2 points");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DomainError("pearson_correlation: undefined for constant sequence");
  return sxy / std::sqrt(sxx * syy);
}

SvrModel svr_train(const std::vector<TrainingPair>& pairs, double c, double gamma,
                   double epsilon_tube) {
  if (pairs.size() < 2) throw DomainError("svr_train: need at least 2 pairs");
  if (c <= 0.0 || gamma <= 0.0) throw DomainError("svr_train: c and gamma must be positive");
  if (epsilon_tube < 0.0) throw DomainError("svr_train: negative epsilon tube");

  const std::size_t l = pairs.size();
  SvrModel model;
  model.kernel_gamma = gamma;
  model.c = c;
  model.epsilon_tube = epsilon_tube;

  double mean_target = 0.0;
  for (const TrainingPair& p : pairs) mean_target += p.min_projections;
  mean_target /= static_cast<double>(l);

  const auto [pmin, pmax] = std::minmax_element(
      pairs.begin(), pairs.end(),
      [](const TrainingPair& a, const TrainingPair& b) { return a.speed_stat < b.speed_stat; });
  if (pmin->speed_stat == pmax->speed_stat) {
    model.bias = mean_target;  // bias-only fit for degenerate inputs
    return model;
  }

  // SMO over the 2l-variable dual: p < l carries sign +1 (alpha), p >= l
  // carries sign -1 (alpha*); box [0, C]; sum of signed variables is 0.
  Matrix k(l, l);
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = 0; j < l; ++j)
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rbf(pairs[i].speed_stat, pairs[j].speed_stat, gamma);

  const std::size_t n2 = 2 * l;
  std::vector<double> alpha(n2, 0.0), grad(n2);
  auto sign = [l](std::size_t p) { return p < l ? 1.0 : -1.0; };
  auto base = [l](std::size_t p) { return p < l ? p : p - l; };
  for (std::size_t p = 0; p < n2; ++p) {
    const double y = static_cast<double>(pairs[base(p)].min_projections);
    grad[p] = p < l ? epsilon_tube - y : epsilon_tube + y;
  }

  constexpr double kTol = 1e-4;
  constexpr double kTau = 1e-12;
  const long max_iters = std::max<long>(200000, static_cast<long>(n2) * 2000);
  double gmax = 0.0, gmax2 = 0.0;

  for (long iter = 0; iter < max_iters; ++iter) {
    // maximal-violating-pair selection, second-order j choice
    gmax = -std::numeric_limits<double>::infinity();
    gmax2 = -std::numeric_limits<double>::infinity();
    std::size_t i = n2;
    for (std::size_t p = 0; p < n2; ++p) {
      const bool in_up = (sign(p) > 0 && alpha[p] < c) || (sign(p) < 0 && alpha[p] > 0);
      if (in_up && -sign(p) * grad[p] > gmax) {
        gmax = -sign(p) * grad[p];
        i = p;
      }
    }
    std::size_t j = n2;
    double best_obj = 0.0;
    for (std::size_t p = 0; p < n2; ++p) {
      const bool in_low = (sign(p) > 0 && alpha[p] > 0) || (sign(p) < 0 && alpha[p] < c);
      if (!in_low) continue;
      const double neg = sign(p) * grad[p];
      if (neg > gmax2) gmax2 = neg;
      const double grad_diff = gmax + neg;
      if (grad_diff > 0) {
        const double kii = k(static_cast<Eigen::Index>(base(i)), static_cast<Eigen::Index>(base(i)));
        const double kpp = k(static_cast<Eigen::Index>(base(p)), static_cast<Eigen::Index>(base(p)));
        const double kip = k(static_cast<Eigen::Index>(base(i)), static_cast<Eigen::Index>(base(p)));
        const double quad = std::max(kii + kpp - 2.0 * kip, kTau);
        const double obj = -(grad_diff * grad_diff) / quad;
        if (obj < best_obj) {
          best_obj = obj;
          j = p;
        }
      }
    }
    if (i == n2 || j == n2 || gmax + gmax2 < kTol) break;

    const double kii = k(static_cast<Eigen::Index>(base(i)), static_cast<Eigen::Index>(base(i)));
    const double kjj = k(static_cast<Eigen::Index>(base(j)), static_cast<Eigen::Index>(base(j)));
    const double kij = k(static_cast<Eigen::Index>(base(i)), static_cast<Eigen::Index>(base(j)));
    const double quad = std::max(kii + kjj - 2.0 * kij, kTau);
    const double old_ai = alpha[i], old_aj = alpha[j];

    if (sign(i) != sign(j)) {
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = diff; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = -diff; }
      }
      if (diff > 0) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = c - diff; }
      } else {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = c + diff; }
      }
    } else {
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > c) {
        if (alpha[i] > c) { alpha[i] = c; alpha[j] = sum - c; }
      } else {
        if (alpha[j] < 0) { alpha[j] = 0; alpha[i] = sum; }
      }
      if (sum > c) {
        if (alpha[j] > c) { alpha[j] = c; alpha[i] = sum - c; }
      } else {
        if (alpha[i] < 0) { alpha[i] = 0; alpha[j] = sum; }
      }
    }

    const double dai = sign(i) * (alpha[i] - old_ai);
    const double daj = sign(j) * (alpha[j] - old_aj);
    for (std::size_t p = 0; p < n2; ++p) {
      const double kpi = k(static_cast<Eigen::Index>(base(p)), static_cast<Eigen::Index>(base(i)));
      const double kpj = k(static_cast<Eigen::Index>(base(p)), static_cast<Eigen::Index>(base(j)));
      grad[p] += sign(p) * (kpi * dai + kpj * daj);
    }
  }

  // bias from the free-variable KKT conditions, midpoint fallback at bounds
  double free_sum = 0.0;
  int free_count = 0;
  for (std::size_t p = 0; p < n2; ++p) {
    if (alpha[p] > 0 && alpha[p] < c) {
      free_sum += -sign(p) * grad[p];
      ++free_count;
    }
  }
  model.bias = free_count > 0 ? free_sum / free_count : 0.5 * (gmax - gmax2) + gmax2;

  for (std::size_t q = 0; q < l; ++q) {
    const double beta = alpha[q] - alpha[q + l];
    if (beta != 0.0) {
      model.support_vectors.push_back(pairs[q].speed_stat);
      model.dual_coefficients.push_back(beta);
    }
  }
  return model;
}

double svr_predict(const SvrModel& model, double speed_stat) {
  double out = model.bias;
  for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
    out += model.dual_coefficients[i] *
           rbf(speed_stat, model.support_vectors[i], model.kernel_gamma);
  return out;
}

SvrModel svr_train_cv(const std::vector<TrainingPair>& pairs, std::uint64_t seed) {
  if (pairs.size() < 2) throw DomainError("svr_train_cv: need at least 2 pairs");
  const std::vector<double> c_grid = {1.0, 10.0, 100.0};
  const std::vector<double> gamma_grid = {0.1, 1.0, 10.0};
  const std::vector<double> tube_grid = {0.5, 1.0, 2.0};

  // seeded shuffle, then round-robin fold assignment
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.next_index(i)]);
  const int folds = static_cast<int>(std::min<std::size_t>(5, pairs.size()));

  double best_rmse = std::numeric_limits<double>::infinity();
  double best_c = c_grid[0], best_gamma = gamma_grid[0], best_tube = tube_grid[0];
  for (double c : c_grid)
    for (double gamma : gamma_grid)
      for (double tube : tube_grid) {
        double sq_sum = 0.0;
        std::size_t count = 0;
        for (int f = 0; f < folds; ++f) {
          std::vector<TrainingPair> train, val;
          for (std::size_t r = 0; r < order.size(); ++r)
            (static_cast<int>(r % static_cast<std::size_t>(folds)) == f ? val : train)
                .push_back(pairs[order[r]]);
          if (train.size() < 2 || val.empty()) continue;
          const SvrModel m = svr_train(train, c, gamma, tube);
          for (const TrainingPair& p : val) {
            const double e = svr_predict(m, p.speed_stat) - p.min_projections;
            sq_sum += e * e;
            ++count;
          }
        }
        if (count == 0) continue;
        const double rmse = std::sqrt(sq_sum / static_cast<double>(count));
        if (rmse < best_rmse - 1e-12) {
          best_rmse = rmse;
          best_c = c;
          best_gamma = gamma;
          best_tube = tube;
        }
      }
  return svr_train(pairs, best_c, best_gamma, best_tube);
}

LookupTable build_lookup_table(const SvrModel& model, double speed_min, double speed_max,
                               int bins, int m_max) {
  if (bins < 1) throw DomainError("build_lookup_table: bins must be >= 1");
  if (speed_min >= speed_max) throw DomainError("build_lookup_table: empty speed range");
  LookupTable table;
  table.m_max = m_max;
  const double width = (speed_max - speed_min) / bins;
  for (int b = 0; b < bins; ++b) {
    const double mid = speed_min + (b + 0.5) * width;
    const int m = std::clamp(static_cast<int>(std::ceil(svr_predict(model, mid))), 1, m_max);
    table.entries.push_back({speed_min + (b + 1) * width, m});
  }
  return table;
}

}  // namespace simpletrack
