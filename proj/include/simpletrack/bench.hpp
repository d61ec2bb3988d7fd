#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "simpletrack/adaptive.hpp"
#include "simpletrack/core.hpp"
#include "simpletrack/dictionary.hpp"
#include "simpletrack/projection.hpp"

namespace simpletrack {

enum class SynthProfile { Pedestrian, Animal };

struct ProfileParams {
  double dt = 0.5;          // sample period, seconds
  int segment_size = 128;   // points per segment
  int trace_points = 1280;  // points per generated trace
};

ProfileParams profile_params(SynthProfile profile);

/// Smooth seeded random-walk traces: mean-reverting speed clipped below the
/// 6 km/h walking limit, heading = base + bounded noise walk + an oscillation
/// whose phase advances with distance traveled (animal profile), so heading
/// complexity scales with speed. Deterministic per seed.
std::vector<Trace> synth_traces(SynthProfile profile, int count, std::uint64_t seed);

std::pair<std::vector<Segment>, std::vector<Segment>> train_test_split(
    const std::vector<Segment>& segments, double fraction, std::uint64_t seed);

enum class MethodName {
  DctG,
  DG,
  DSvdRandom,
  DElad,
  SimpleTrack,
  SimpleTrackNonAdaptive,
  Squish,
};

std::string to_string(MethodName name);
MethodName method_from_string(const std::string& name);

/// m = round((1 - savings) * n), round-half-up.
int projections_for_savings(double level, int n);

struct MethodConfig {
  MethodName name = MethodName::SimpleTrack;
  bool adaptive = false;  // SimpleTrack only: use the trained look-up table
  std::vector<std::uint64_t> seeds = {0};
};

struct BenchRow {
  std::string dataset;
  std::string method;
  double space_savings = 0.0;
  double ade_mean = 0.0;
  double ade_std = 0.0;
  int trials = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

struct SweepOptions {
  std::string dataset_id = "synthetic";
  double train_fraction = 0.8;
  std::uint64_t split_seed = 1;
  int dict_iterations = 12;
  std::uint64_t dict_seed = 1;
  double dict_lambda = 0.0;  // <= 0: scale-aware default
  int max_train_samples = 400;  // cap on pooled dictionary training vectors
  int max_test_segments = 0;    // 0 = use the whole test split
  double epsilon_factor = 1e-3; // decode epsilon = factor * ||y||
  double xi = 0.5;              // adaptive training tolerance, metres
  int lookup_bins = 100;
  // Elad defaults; the sweep only needs improvement over the initialization.
  double elad_threshold = 0.2;
  double elad_shrink = 0.6;
  int elad_iterations = 50;
};

/// Per method and savings level: m = round((1 - level) * n); train the
/// required models on the train split, encode/decode the test split, report
/// mean/std ADE over the method's seeds. The adaptive SimpleTrack row ignores
/// the fixed m and reports its realized savings instead; the non-adaptive
/// variant uses the constant mean m of the adaptive run.
BenchReport sweep(const std::vector<Segment>& dataset, const std::vector<MethodConfig>& methods,
                  const std::vector<double>& savings_levels, const SweepOptions& options = {});

struct CorrelationRow {
  std::string statistic;
  double correlation = 0.0;
  bool defined = true;
};

/// Table of the five speed statistics against the per-segment minimal
/// projection counts.
std::vector<CorrelationRow> correlation_study(const std::vector<Segment>& segments,
                                              const ProjectionMatrix& proj,
                                              const Dictionary& dict, double xi);

enum class ReportFormat { Csv, Json };

void emit_report(const BenchReport& report, const std::filesystem::path& path,
                 ReportFormat format);
BenchReport report_from_json_file(const std::filesystem::path& path);

}  // namespace simpletrack
