// Command-line front end: synthetic data generation, model training,
// encode/decode, and the benchmark sweep.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "simpletrack/bench.hpp"
#include "simpletrack/codec.hpp"
#include "simpletrack/model_io.hpp"

namespace fs = std::filesystem;
using namespace simpletrack;

namespace {

constexpr double kMaxWalkSpeed = 6.0 / 3.6;

CsvFormat detect_format(const fs::path& path) {
  std::ifstream in(path);
  std::string first;
  std::getline(in, first);
  return first.find("lat") != std::string::npos ? CsvFormat::LatLon : CsvFormat::Metric;
}

std::vector<fs::path> trace_files(const fs::path& input) {
  std::vector<fs::path> files;
  if (fs::is_directory(input)) {
    for (const auto& entry : fs::directory_iterator(input))
      if (entry.path().extension() == ".csv") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(input);
  }
  if (files.empty()) throw IoError("no trace files under " + input.string());
  return files;
}

std::vector<Trace> load_traces(const fs::path& input) {
  std::vector<Trace> traces;
  for (const fs::path& f : trace_files(input)) traces.push_back(ingest_csv(f, detect_format(f)));
  return traces;
}

std::vector<Segment> segment_all(const std::vector<Trace>& traces, int segment_size,
                                 double max_speed) {
  std::vector<Segment> segments;
  int dropped_speed = 0, dropped_incomplete = 0;
  for (const Trace& t : traces) {
    SegmentationResult r = segment_trace(t, segment_size, max_speed);
    dropped_speed += r.dropped_speed;
    dropped_incomplete += r.dropped_incomplete;
    for (Segment& s : r.segments) segments.push_back(std::move(s));
  }
  std::cerr << "segments: " << segments.size() << " (dropped " << dropped_speed
            << " over speed, " << dropped_incomplete << " incomplete)\n";
  if (segments.empty()) throw ConfigError("no usable segments in input");
  return segments;
}

void write_trace_csv(const Trace& trace, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "t,e,n\n";
  out.precision(12);
  for (const MetricPoint& p : trace.points)
    out << p.timestamp << ',' << p.easting << ',' << p.northing << '\n';
}

std::vector<double> parse_doubles(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"SimpleTrack trajectory compression toolkit"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate synthetic traces");
  std::string profile_name = "animal", out_path;
  int count = 1;
  std::uint64_t seed = 0;
  synth->add_option("--profile", profile_name)->check(CLI::IsMember({"pedestrian", "animal"}));
  synth->add_option("--count", count)->check(CLI::PositiveNumber);
  synth->add_option("--seed", seed);
  synth->add_option("--out", out_path)->required();

  // learn-dict
  auto* learn = app.add_subcommand("learn-dict", "learn a sparsifying dictionary");
  std::string in_path, model_path;
  int atoms = 0, iters = 12, segment_size = 128;
  double lambda = 0.0;
  std::uint64_t dict_seed = 1;
  learn->add_option("--in", in_path)->required();
  learn->add_option("--atoms", atoms);
  learn->add_option("--lambda", lambda);
  learn->add_option("--iters", iters)->check(CLI::PositiveNumber);
  learn->add_option("--seed", dict_seed);
  learn->add_option("--segment-size", segment_size);
  learn->add_option("--out", model_path)->required();

  // build-proj
  auto* build = app.add_subcommand("build-proj", "construct a projection matrix");
  std::string dict_path, method_name = "svd-top-m", proj_path;
  int m_max = 0;
  std::uint64_t proj_seed = 0;
  double elad_threshold = 0.2, elad_shrink = 0.6;
  int elad_iters = 50;
  build->add_option("--dict", dict_path)->required();
  build->add_option("--method", method_name)
      ->check(CLI::IsMember({"gaussian", "svd-random", "svd-top-m", "elad"}));
  build->add_option("--m-max", m_max)->required()->check(CLI::PositiveNumber);
  build->add_option("--seed", proj_seed);
  build->add_option("--t-threshold", elad_threshold);
  build->add_option("--shrink", elad_shrink);
  build->add_option("--elad-iters", elad_iters);
  build->add_option("--out", proj_path)->required();

  // train-adaptive
  auto* train = app.add_subcommand("train-adaptive", "train the speed -> m look-up table");
  std::string ta_dict, ta_proj, ta_in, lut_path, svr_path;
  double xi = 0.5;
  int bins = 100, ta_m_max = 0, ta_segment_size = 128;
  std::uint64_t cv_seed = 1;
  train->add_option("--dict", ta_dict)->required();
  train->add_option("--proj", ta_proj)->required();
  train->add_option("--in", ta_in)->required();
  train->add_option("--xi", xi);
  train->add_option("--bins", bins);
  train->add_option("--m-max", ta_m_max);
  train->add_option("--segment-size", ta_segment_size);
  train->add_option("--seed", cv_seed);
  train->add_option("--out", lut_path)->required();
  train->add_option("--svr-out", svr_path);

  // encode
  auto* encode = app.add_subcommand("encode", "node-side encoding to the wire format");
  std::string enc_in, enc_proj, enc_lut, enc_out;
  int enc_segment_size = 128;
  encode->add_option("--in", enc_in)->required();
  encode->add_option("--proj", enc_proj)->required();
  encode->add_option("--lut", enc_lut)->required();
  encode->add_option("--segment-size", enc_segment_size);
  encode->add_option("--out", enc_out)->required();

  // decode
  auto* decode = app.add_subcommand("decode", "sink-side decoding to CSV");
  std::string dec_in, dec_dict, dec_proj, dec_out;
  double epsilon_factor = 1e-6, sample_period = 0.5;
  decode->add_option("--in", dec_in)->required();
  decode->add_option("--dict", dec_dict)->required();
  decode->add_option("--proj", dec_proj)->required();
  decode->add_option("--epsilon-factor", epsilon_factor);
  decode->add_option("--sample-period", sample_period);
  decode->add_option("--out", dec_out)->required();

  // bench
  auto* bench = app.add_subcommand("bench", "ADE versus space savings sweep");
  std::string bench_in, methods_list = "SimpleTrack,D-SVDRandom,DCT-G",
              savings_list = "0.6,0.7,0.8,0.9", report_path = "report.csv";
  int seeds = 10, bench_segment_size = 128, max_test = 0;
  std::uint64_t bench_seed = 1;
  bench->add_option("--in", bench_in)->required();
  bench->add_option("--methods", methods_list);
  bench->add_option("--savings", savings_list);
  bench->add_option("--seeds", seeds)->check(CLI::PositiveNumber);
  bench->add_option("--segment-size", bench_segment_size);
  bench->add_option("--max-test-segments", max_test);
  bench->add_option("--split-seed", bench_seed);
  bench->add_option("--report", report_path);

  // correlate
  auto* correlate = app.add_subcommand("correlate", "speed statistic vs required m");
  std::string co_in, co_dict, co_proj;
  double co_xi = 0.5;
  int co_segment_size = 128;
  correlate->add_option("--in", co_in)->required();
  correlate->add_option("--dict", co_dict)->required();
  correlate->add_option("--proj", co_proj)->required();
  correlate->add_option("--xi", co_xi);
  correlate->add_option("--segment-size", co_segment_size);

  app.parse(argc, argv);

  if (synth->parsed()) {
    const SynthProfile profile =
        profile_name == "animal" ? SynthProfile::Animal : SynthProfile::Pedestrian;
    const std::vector<Trace> traces = synth_traces(profile, count, seed);
    if (traces.size() == 1 && fs::path(out_path).extension() == ".csv") {
      write_trace_csv(traces.front(), out_path);
    } else {
      fs::create_directories(out_path);
      for (std::size_t i = 0; i < traces.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "trace_%04zu.csv", i);
        write_trace_csv(traces[i], fs::path(out_path) / name);
      }
    }
    return 0;
  }

  if (learn->parsed()) {
    const std::vector<Segment> segments =
        segment_all(load_traces(in_path), segment_size, kMaxWalkSpeed);
    std::vector<Vector> samples;
    for (const Segment& s : segments) {
      samples.push_back(s.easting_vec);
      samples.push_back(s.northing_vec);
    }
    const int d = atoms > 0 ? atoms : 2 * segment_size;
    const double l = lambda > 0.0 ? lambda : default_lambda(samples, d, dict_seed);
    const Dictionary dict = learn_dictionary(samples, d, l, iters, dict_seed);
    save_dictionary(dict, model_path);
    std::cerr << "dictionary " << dict.dim() << "x" << dict.atom_count() << ", lambda " << l
              << ", final objective " << dict.train_objective_history.back() << "\n";
    return 0;
  }

  if (build->parsed()) {
    const Dictionary dict = load_dictionary(dict_path);
    ProjectionMatrix proj;
    const ProjectionMethod method = projection_method_from_string(method_name);
    switch (method) {
      case ProjectionMethod::Gaussian:
        proj = gaussian_matrix(m_max, dict.dim(), proj_seed);
        break;
      case ProjectionMethod::SvdRandom:
        proj = svd_random_matrix(dict, m_max, proj_seed);
        break;
      case ProjectionMethod::SvdTopM:
        proj = svd_topm_matrix(dict, m_max);
        break;
      case ProjectionMethod::Elad:
        proj = elad_optimize(dict, m_max, elad_threshold, elad_shrink, elad_iters, proj_seed);
        break;
    }
    save_projection(proj, proj_path);
    return 0;
  }

  if (train->parsed()) {
    const Dictionary dict = load_dictionary(ta_dict);
    const ProjectionMatrix proj = load_projection(ta_proj);
    const std::vector<Segment> segments =
        segment_all(load_traces(ta_in), ta_segment_size, kMaxWalkSpeed);
    const int mm = ta_m_max > 0 ? ta_m_max : proj.m_max();
    std::vector<TrainingPair> pairs;
    for (const Segment& s : segments)
      pairs.push_back({speed_stats(s).mean, min_projections_for_error(s, proj, dict, xi, mm).m});
    const SvrModel model = svr_train_cv(pairs, cv_seed);
    const auto [lo, hi] = std::minmax_element(
        pairs.begin(), pairs.end(),
        [](const TrainingPair& a, const TrainingPair& b) { return a.speed_stat < b.speed_stat; });
    double smax = hi->speed_stat;
    if (lo->speed_stat >= smax) smax = lo->speed_stat + 1e-6;
    save_lookup_table(build_lookup_table(model, lo->speed_stat, smax, bins, mm), lut_path);
    if (!svr_path.empty()) save_svr_model(model, svr_path);
    return 0;
  }

  if (encode->parsed()) {
    const ProjectionMatrix proj = load_projection(enc_proj);
    const LookupTable lut = load_lookup_table(enc_lut);
    const NodeState state = make_node_state(proj, lut);
    const std::vector<Segment> segments =
        segment_all(load_traces(enc_in), enc_segment_size, kMaxWalkSpeed);
    std::vector<EncodedSegment> records;
    for (std::size_t i = 0; i < segments.size(); ++i)
      records.push_back(encode_segment(segments[i], state, static_cast<std::uint16_t>(i)));
    write_encoded_file(enc_out, records);
    return 0;
  }

  if (decode->parsed()) {
    const Dictionary dict = load_dictionary(dec_dict);
    const ProjectionMatrix proj = load_projection(dec_proj);
    const std::vector<EncodedSegment> records = read_encoded_file(dec_in);
    std::ofstream out(dec_out);
    if (!out) throw IoError("cannot open " + dec_out + " for writing");
    out << "t,e,n\n";
    out.precision(12);
    for (const EncodedSegment& r : records) {
      const double eps = epsilon_factor * std::max(r.y_easting.norm(), r.y_northing.norm());
      const Segment seg = decode_segment(r, dict, proj, eps, sample_period);
      const double base =
          static_cast<double>(r.segment_index) * static_cast<double>(seg.points.size());
      for (std::size_t i = 0; i < seg.points.size(); ++i)
        out << (base + static_cast<double>(i)) * sample_period << ',' << seg.points[i].easting
            << ',' << seg.points[i].northing << '\n';
    }
    return 0;
  }

  if (bench->parsed()) {
    const std::vector<Segment> segments =
        segment_all(load_traces(bench_in), bench_segment_size, kMaxWalkSpeed);
    std::vector<std::uint64_t> seed_list;
    for (int s = 0; s < seeds; ++s) seed_list.push_back(static_cast<std::uint64_t>(s));
    std::vector<MethodConfig> methods;
    std::stringstream ss(methods_list);
    std::string token;
    while (std::getline(ss, token, ',')) {
      MethodConfig cfg;
      if (token == "SimpleTrack-adaptive") {
        cfg.name = MethodName::SimpleTrack;
        cfg.adaptive = true;
      } else {
        cfg.name = method_from_string(token);
      }
      cfg.seeds = seed_list;
      methods.push_back(cfg);
    }
    SweepOptions options;
    options.dataset_id = fs::path(bench_in).filename().string();
    options.split_seed = bench_seed;
    options.max_test_segments = max_test;
    const BenchReport report = sweep(segments, methods, parse_doubles(savings_list), options);
    const ReportFormat format =
        fs::path(report_path).extension() == ".json" ? ReportFormat::Json : ReportFormat::Csv;
    emit_report(report, report_path, format);
    for (const BenchRow& r : report.rows)
      std::cout << r.method << " savings=" << r.space_savings << " ade=" << r.ade_mean
                << " +/- " << r.ade_std << "\n";
    return 0;
  }

  if (correlate->parsed()) {
    const Dictionary dict = load_dictionary(co_dict);
    const ProjectionMatrix proj = load_projection(co_proj);
    const std::vector<Segment> segments =
        segment_all(load_traces(co_in), co_segment_size, kMaxWalkSpeed);
    for (const CorrelationRow& row : correlation_study(segments, proj, dict, co_xi)) {
      std::cout << row.statistic << ",";
      if (row.defined)
        std::cout << row.correlation << "\n";
      else
        std::cout << "undefined\n";
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError& e) {
    CLI::App dummy;
    const int code = dummy.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const ModelMismatchError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
