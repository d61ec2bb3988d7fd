#include "simpletrack/bench.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "simpletrack/numerics.hpp"
#include "simpletrack/reconstruct.hpp"
#include "simpletrack/rng.hpp"
#include "simpletrack/baselines.hpp"

namespace simpletrack {

namespace {

constexpr double kWalkSpeedLimit = 6.0 / 3.6;  // m/s

struct OscComp {
  double wiggles;  // oscillation periods per segment
  double amp;      // heading: radians; speed: m/s
};

// One behavioral mode of the animal profile (graze / walk / trot). Faster
// modes populate more, and higher, rungs of a shared frequency ladder, so a
// segment's geometric complexity grows with its mean speed.
struct MotionMode {
  double v_target;                // m/s
  std::vector<OscComp> heading;   // lateral oscillation components
  std::vector<OscComp> speed;     // tangential oscillation components
};

struct GenParams {
  double reversion;
  double sigma_v;
  double sigma_theta;  // heading noise walk, scaled by current speed
  double kappa;        // mean reversion of the heading noise walk
  double heading_bound;
  double jitter;     // relative target-speed jitter per trace
  double target_lo;  // uniform target-speed range when no modes are given
  double target_hi;
  std::vector<MotionMode> modes;
};

GenParams gen_params(SynthProfile profile) {
  if (profile == SynthProfile::Animal) {
    GenParams p{0.05, 0.020, 0.008, 0.10, 1.0, 0.10, 0.0, 0.0, {}};
    p.modes = {
        {0.75, {{2.3, 0.36}, {4.7, 0.74}}, {{1.55, 0.18}}},
        {1.10, {{2.3, 0.25}, {4.7, 0.50}, {7.1, 0.76}, {9.6, 0.95}}, {{1.55, 0.18}}},
        {1.45,
         {{2.3, 0.19}, {4.7, 0.38}, {7.1, 0.58}, {9.6, 0.78}, {12.1, 0.98}, {14.6, 1.00}},
         {{1.55, 0.18}}},
    };
    return p;
  }
  return {0.10, 0.010, 0.012, 0.0, 0.5, 0.0, 0.15, 1.50, {}};
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size()));
}

Vector decode_vec(const Matrix& phi, const Matrix& psi, const Vector& x, double eps_factor) {
  SensingProblem p;
  p.phi = phi;
  p.psi = psi;
  p.y = phi * x;
  p.epsilon = eps_factor * p.y.norm();
  // Sweep decodes feed metre-scale ADE statistics; a relaxed per-stage
  // tolerance is indistinguishable there and much cheaper.
  SolverConfig cfg;
  cfg.stage_kkt_tol = 1e-6;
  return solve_l1(p, cfg).x_hat;
}

/// ADE of decoding every test segment through the sensing pair (phi, psi).
double ade_for_phi(const std::vector<Segment>& test, const Matrix& phi, const Matrix& psi,
                   double eps_factor) {
  std::vector<Segment> rec = test;
  for (Segment& seg : rec) {
    seg.easting_vec = decode_vec(phi, psi, seg.easting_vec, eps_factor);
    seg.northing_vec = decode_vec(phi, psi, seg.northing_vec, eps_factor);
  }
  return ade(test, rec);
}

double ade_for_squish(const std::vector<Segment>& test, int beta) {
  std::vector<Segment> rec = test;
  for (Segment& seg : rec) {
    const std::vector<MetricPoint> kept = squish_compress(seg.points, beta);
    std::vector<double> stamps;
    stamps.reserve(seg.points.size());
    for (const MetricPoint& p : seg.points) stamps.push_back(p.timestamp);
    const std::vector<MetricPoint> full = squish_decompress(kept, stamps);
    for (std::size_t i = 0; i < full.size(); ++i) {
      seg.easting_vec[static_cast<Eigen::Index>(i)] = full[i].easting - seg.easting_mean;
      seg.northing_vec[static_cast<Eigen::Index>(i)] = full[i].northing - seg.northing_mean;
    }
  }
  return ade(test, rec);
}

std::vector<Segment> subsample(const std::vector<Segment>& segments, int cap,
                               std::uint64_t seed) {
  if (cap <= 0 || segments.size() <= static_cast<std::size_t>(cap)) return segments;
  std::vector<std::size_t> idx(segments.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (int i = 0; i < cap; ++i) {
    const std::size_t j =
        static_cast<std::size_t>(i) + rng.next_index(idx.size() - static_cast<std::size_t>(i));
    std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
  }
  idx.resize(static_cast<std::size_t>(cap));
  std::sort(idx.begin(), idx.end());
  std::vector<Segment> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(segments[i]);
  return out;
}

struct AdaptiveOutcome {
  double ade_value = 0.0;
  double mean_m = 0.0;
};

AdaptiveOutcome run_adaptive(const std::vector<Segment>& train, const std::vector<Segment>& test,
                             const Dictionary& dict, const ProjectionMatrix& proj_full,
                             const SweepOptions& opt, int m_max) {
  std::vector<TrainingPair> pairs;
  pairs.reserve(train.size());
  for (const Segment& seg : train) {
    const MinProjResult r = min_projections_for_error(seg, proj_full, dict, opt.xi, m_max);
    pairs.push_back({speed_stats(seg).mean, r.m});
  }
  const SvrModel model = svr_train_cv(pairs, opt.split_seed);
  const auto [lo, hi] = std::minmax_element(
      pairs.begin(), pairs.end(),
      [](const TrainingPair& a, const TrainingPair& b) { return a.speed_stat < b.speed_stat; });
  double smin = lo->speed_stat, smax = hi->speed_stat;
  if (smin >= smax) smax = smin + 1e-6;
  const LookupTable table = build_lookup_table(model, smin, smax, opt.lookup_bins, m_max);

  std::vector<Segment> rec = test;
  double m_sum = 0.0;
  for (Segment& seg : rec) {
    const int m = table.lookup(speed_stats(seg).mean);
    m_sum += m;
    const Matrix phi = proj_full.phi.topRows(m);
    seg.easting_vec = decode_vec(phi, dict.atoms, seg.easting_vec, opt.epsilon_factor);
    seg.northing_vec = decode_vec(phi, dict.atoms, seg.northing_vec, opt.epsilon_factor);
  }
  AdaptiveOutcome out;
  out.ade_value = ade(test, rec);
  out.mean_m = m_sum / static_cast<double>(test.size());
  return out;
}

}  // namespace

int projections_for_savings(double level, int n) {
  return static_cast<int>(std::floor((1.0 - level) * n + 0.5));
}

ProfileParams profile_params(SynthProfile profile) {
  if (profile == SynthProfile::Animal) return {0.5, 128, 1280};
  return {30.0, 32, 160};
}

std::vector<Trace> synth_traces(SynthProfile profile, int count, std::uint64_t seed) {
  if (count < 1) throw DomainError("synth_traces: count must be >= 1");
  const ProfileParams params = profile_params(profile);
  const GenParams gen = gen_params(profile);
  const double vmax = 0.999 * kWalkSpeedLimit;

  Rng rng(seed);
  std::vector<Trace> traces;
  traces.reserve(static_cast<std::size_t>(count));
  for (int t = 0; t < count; ++t) {
    Trace trace;
    trace.sample_period = params.dt;
    trace.points.reserve(static_cast<std::size_t>(params.trace_points));

    constexpr double kTwoPi = 2.0 * 3.14159265358979323846;
    static const MotionMode kPlain{};
    const MotionMode& mode =
        gen.modes.empty() ? kPlain : gen.modes[rng.next_index(gen.modes.size())];
    const double target =
        gen.modes.empty()
            ? gen.target_lo + rng.uniform() * (gen.target_hi - gen.target_lo)
            : std::min(mode.v_target * (1.0 - gen.jitter + 2.0 * gen.jitter * rng.uniform()),
                       vmax);
    const double theta0 = rng.uniform() * kTwoPi;
    const double seg_seconds = static_cast<double>(params.segment_size) * params.dt;
    std::vector<double> omega_h, phase_h, omega_s, phase_s;
    for (const OscComp& c : mode.heading) {
      omega_h.push_back(kTwoPi * c.wiggles / seg_seconds);
      phase_h.push_back(rng.uniform() * kTwoPi);
    }
    for (const OscComp& c : mode.speed) {
      omega_s.push_back(kTwoPi * c.wiggles / seg_seconds);
      phase_s.push_back(rng.uniform() * kTwoPi);
    }

    double walk = 0.0;
    double v = std::min(target, vmax);
    double e = 0.0, n = 0.0;

    for (int i = 0; i < params.trace_points; ++i) {
      trace.points.push_back({static_cast<double>(i) * params.dt, e, n});
      v += gen.reversion * (target - v) + gen.sigma_v * rng.gaussian();
      v = std::clamp(v, 0.02, vmax);
      walk += -gen.kappa * walk + gen.sigma_theta * v * rng.gaussian();
      walk = std::clamp(walk, -gen.heading_bound, gen.heading_bound);
      double osc = 0.0;
      for (std::size_t c = 0; c < omega_h.size(); ++c) {
        phase_h[c] += omega_h[c] * params.dt;
        osc += mode.heading[c].amp * std::sin(phase_h[c]);
      }
      double dv = 0.0;
      for (std::size_t c = 0; c < omega_s.size(); ++c) {
        phase_s[c] += omega_s[c] * params.dt;
        dv += mode.speed[c].amp * std::sin(phase_s[c]);
      }
      const double theta = theta0 + walk + osc;
      const double v_step = std::clamp(v + dv, 0.02, vmax);
      e += v_step * params.dt * std::cos(theta);
      n += v_step * params.dt * std::sin(theta);
    }
    traces.push_back(std::move(trace));
  }
  return traces;
}

std::pair<std::vector<Segment>, std::vector<Segment>> train_test_split(
    const std::vector<Segment>& segments, double fraction, std::uint64_t seed) {
  if (segments.empty()) throw DomainError("train_test_split: empty input");
  if (fraction <= 0.0 || fraction >= 1.0)
    throw DomainError("train_test_split: fraction must be in (0, 1)");

  std::vector<std::size_t> idx(segments.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.next_index(i)]);

  const std::size_t train_size = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(segments.size())));
  std::pair<std::vector<Segment>, std::vector<Segment>> out;
  for (std::size_t r = 0; r < idx.size(); ++r)
    (r < train_size ? out.first : out.second).push_back(segments[idx[r]]);
  return out;
}

std::string to_string(MethodName name) {
  switch (name) {
    case MethodName::DctG: return "DCT-G";
    case MethodName::DG: return "D-G";
    case MethodName::DSvdRandom: return "D-SVDRandom";
    case MethodName::DElad: return "D-Elad";
    case MethodName::SimpleTrack: return "SimpleTrack";
    case MethodName::SimpleTrackNonAdaptive: return "SimpleTrack-nonadaptive";
    case MethodName::Squish: return "SQUISH";
  }
  return "unknown";
}

MethodName method_from_string(const std::string& name) {
  if (name == "DCT-G") return MethodName::DctG;
  if (name == "D-G") return MethodName::DG;
  if (name == "D-SVDRandom") return MethodName::DSvdRandom;
  if (name == "D-Elad") return MethodName::DElad;
  if (name == "SimpleTrack") return MethodName::SimpleTrack;
  if (name == "SimpleTrack-nonadaptive") return MethodName::SimpleTrackNonAdaptive;
  if (name == "SQUISH") return MethodName::Squish;
  throw ConfigError("unknown method: " + name);
}

BenchReport sweep(const std::vector<Segment>& dataset, const std::vector<MethodConfig>& methods,
                  const std::vector<double>& savings_levels, const SweepOptions& options) {
  if (dataset.empty()) throw ConfigError("sweep: empty dataset");
  for (double level : savings_levels)
    if (level <= 0.0 || level >= 1.0) throw ConfigError("sweep: savings level outside (0, 1)");

  const int n = static_cast<int>(dataset.front().easting_vec.size());
  auto [train, test_full] = train_test_split(dataset, options.train_fraction, options.split_seed);
  const std::vector<Segment> test =
      subsample(test_full, options.max_test_segments, options.split_seed ^ 0x5eedULL);
  if (test.empty()) throw ConfigError("sweep: empty test split");

  const bool needs_dict = std::any_of(methods.begin(), methods.end(), [](const MethodConfig& m) {
    return m.name != MethodName::DctG && m.name != MethodName::Squish;
  });

  Dictionary dict;
  SvdResult dict_svd;
  Matrix dct = dct_basis(n);
  ProjectionMatrix proj_full;  // all n svd-top-m rows; nested prefixes give every m
  if (needs_dict) {
    std::vector<Vector> samples;
    samples.reserve(2 * train.size());
    for (const Segment& seg : train) {
      samples.push_back(seg.easting_vec);
      samples.push_back(seg.northing_vec);
    }
    if (options.max_train_samples > 0 &&
        samples.size() > static_cast<std::size_t>(options.max_train_samples)) {
      Rng rng(options.dict_seed ^ 0x7a1eULL);
      for (int i = 0; i < options.max_train_samples; ++i) {
        const std::size_t j = static_cast<std::size_t>(i) +
                              rng.next_index(samples.size() - static_cast<std::size_t>(i));
        std::swap(samples[static_cast<std::size_t>(i)], samples[j]);
      }
      samples.resize(static_cast<std::size_t>(options.max_train_samples));
    }
    const int d = 2 * n;
    const double lambda = options.dict_lambda > 0.0
                              ? options.dict_lambda
                              : default_lambda(samples, d, options.dict_seed);
    dict = learn_dictionary(samples, d, lambda, options.dict_iterations, options.dict_seed);
    dict_svd = svd(dict.atoms);
    proj_full = svd_topm_matrix(dict, dict_svd, n);
  }

  // Adaptive pipeline is shared between the adaptive SimpleTrack row and the
  // non-adaptive constant-m row; run it lazily at most once.
  const int adaptive_m_max = std::max(1, static_cast<int>(std::floor(0.4 * n + 0.5)));
  bool adaptive_done = false;
  AdaptiveOutcome adaptive_outcome;
  auto ensure_adaptive = [&]() {
    if (!adaptive_done) {
      adaptive_outcome = run_adaptive(train, test, dict, proj_full, options, adaptive_m_max);
      adaptive_done = true;
    }
  };

  BenchReport report;
  for (const MethodConfig& method : methods) {
    const std::size_t trials = std::max<std::size_t>(1, method.seeds.size());
    for (double level : savings_levels) {
      const int m = std::clamp(projections_for_savings(level, n), 1, n);
      BenchRow row;
      row.dataset = options.dataset_id;
      row.method = to_string(method.name);
      row.space_savings = level;
      row.trials = static_cast<int>(trials);

      switch (method.name) {
        case MethodName::DctG:
        case MethodName::DG:
        case MethodName::DSvdRandom:
        case MethodName::DElad: {
          const Matrix& psi = method.name == MethodName::DctG ? dct : dict.atoms;
          std::vector<double> ades;
          ades.reserve(trials);
          for (std::uint64_t seed : method.seeds) {
            Matrix phi;
            if (method.name == MethodName::DctG || method.name == MethodName::DG)
              phi = gaussian_matrix(m, n, seed).phi;
            else if (method.name == MethodName::DSvdRandom)
              phi = svd_random_matrix(dict, dict_svd, m, seed).phi;
            else
              phi = elad_optimize(dict, m, options.elad_threshold, options.elad_shrink,
                                  options.elad_iterations, seed)
                        .phi;
            ades.push_back(ade_for_phi(test, phi, psi, options.epsilon_factor));
          }
          row.ade_mean = mean_of(ades);
          row.ade_std = std_of(ades, row.ade_mean);
          break;
        }
        case MethodName::SimpleTrack: {
          if (method.adaptive) {
            ensure_adaptive();
            row.ade_mean = adaptive_outcome.ade_value;
            row.ade_std = 0.0;
            row.space_savings = 1.0 - adaptive_outcome.mean_m / n;
          } else {
            // deterministic construction: one evaluation, zero spread
            row.ade_mean =
                ade_for_phi(test, proj_full.phi.topRows(m), dict.atoms, options.epsilon_factor);
            row.ade_std = 0.0;
          }
          break;
        }
        case MethodName::SimpleTrackNonAdaptive: {
          ensure_adaptive();
          const int m_bar = std::clamp(
              static_cast<int>(std::floor(adaptive_outcome.mean_m + 0.5)), 1, n);
          row.ade_mean = ade_for_phi(test, proj_full.phi.topRows(m_bar), dict.atoms,
                                     options.epsilon_factor);
          row.ade_std = 0.0;
          row.space_savings = 1.0 - static_cast<double>(m_bar) / n;
          break;
        }
        case MethodName::Squish: {
          row.ade_mean = ade_for_squish(test, std::max(2, m));
          row.ade_std = 0.0;
          break;
        }
      }
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

std::vector<CorrelationRow> correlation_study(const std::vector<Segment>& segments,
                                              const ProjectionMatrix& proj,
                                              const Dictionary& dict, double xi) {
  if (segments.size() < 10) throw DomainError("correlation_study: need at least 10 segments");

  std::vector<double> ms;
  std::vector<std::vector<double>> stats(5);
  for (const Segment& seg : segments) {
    const SpeedStats s = speed_stats(seg);
    stats[0].push_back(s.mean);
    stats[1].push_back(s.variance);
    stats[2].push_back(s.median);
    stats[3].push_back(s.maximum);
    stats[4].push_back(s.minimum);
    ms.push_back(min_projections_for_error(seg, proj, dict, xi, proj.m_max()).m);
  }

  const std::array<const char*, 5> names = {"mean", "variance", "median", "maximum", "minimum"};
  std::vector<CorrelationRow> rows;
  for (std::size_t k = 0; k < names.size(); ++k) {
    CorrelationRow row;
    row.statistic = names[k];
    try {
      row.correlation = pearson_correlation(stats[k], ms);
    } catch (const DomainError&) {
      row.defined = false;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void emit_report(const BenchReport& report, const std::filesystem::path& path,
                 ReportFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  if (format == ReportFormat::Csv) {
    out << "dataset,method,space_savings,ade_mean_m,ade_std_m,trials\n";
    out.precision(12);
    for (const BenchRow& r : report.rows)
      out << r.dataset << ',' << r.method << ',' << r.space_savings << ',' << r.ade_mean << ','
          << r.ade_std << ',' << r.trials << '\n';
  } else {
    nlohmann::json j = nlohmann::json::array();
    for (const BenchRow& r : report.rows)
      j.push_back({{"dataset", r.dataset},
                   {"method", r.method},
                   {"space_savings", r.space_savings},
                   {"ade_mean_m", r.ade_mean},
                   {"ade_std_m", r.ade_std},
                   {"trials", r.trials}});
    out << j.dump(2) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

BenchReport report_from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  in >> j;
  BenchReport report;
  for (const auto& item : j) {
    BenchRow r;
    r.dataset = item.at("dataset").get<std::string>();
    r.method = item.at("method").get<std::string>();
    r.space_savings = item.at("space_savings").get<double>();
    r.ade_mean = item.at("ade_mean_m").get<double>();
    r.ade_std = item.at("ade_std_m").get<double>();
    r.trials = item.at("trials").get<int>();
    report.rows.push_back(std::move(r));
  }
  return report;
}

}  // namespace simpletrack
