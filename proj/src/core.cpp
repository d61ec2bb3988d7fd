#include "simpletrack/core.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace simpletrack {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void check_gps(const GpsPoint& p) {
  if (!std::isfinite(p.timestamp) || !std::isfinite(p.latitude) || !std::isfinite(p.longitude))
    throw DomainError("gps point has non-finite field");
  if (p.latitude < -90.0 || p.latitude > 90.0)
    throw DomainError("latitude out of [-90, 90]");
  if (p.longitude < -180.0 || p.longitude > 180.0)
    throw DomainError("longitude out of [-180, 180]");
}

double point_speed(const MetricPoint& a, const MetricPoint& b) {
  const double dt = b.timestamp - a.timestamp;
  const double de = b.easting - a.easting;
  const double dn = b.northing - a.northing;
  return std::hypot(de, dn) / dt;
}

}  // namespace

std::vector<MetricPoint> to_local_metres(const std::vector<GpsPoint>& points,
                                         const GpsPoint& reference) {
  check_gps(reference);
  if (std::abs(reference.latitude) >= 90.0)
    throw DomainError("to_local_metres: reference at a pole");
  const double coslat = std::cos(reference.latitude * kDegToRad);
  std::vector<MetricPoint> out;
  out.reserve(points.size());
  for (const GpsPoint& p : points) {
    check_gps(p);
    MetricPoint m;
    m.timestamp = p.timestamp;
    m.easting = kEarthRadiusMetres * coslat * (p.longitude - reference.longitude) * kDegToRad;
    m.northing = kEarthRadiusMetres * (p.latitude - reference.latitude) * kDegToRad;
    out.push_back(m);
  }
  return out;
}

Trace ingest_csv(const std::filesystem::path& path, CsvFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());

  std::vector<std::array<double, 3>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    // skip a header line
    if (lineno == 1 && line.find_first_not_of("0123456789+-.eE, \r") != std::string::npos) continue;
    std::array<double, 3> row{};
    std::stringstream ss(line);
    std::string cell;
    int col = 0;
    while (std::getline(ss, cell, ',') && col < 3) {
      try {
        std::size_t pos = 0;
        row[col] = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw ParseError("malformed row " + std::to_string(lineno) + " in " + path.string());
      }
      ++col;
    }
    if (col != 3)
      throw ParseError("malformed row " + std::to_string(lineno) + " in " + path.string());
    rows.push_back(row);
  }

  Trace trace;
  if (rows.empty()) return trace;

  if (format == CsvFormat::LatLon) {
    std::vector<GpsPoint> gps;
    gps.reserve(rows.size());
    for (const auto& r : rows) gps.push_back({r[0], r[1], r[2]});
    trace.points = to_local_metres(gps, gps.front());
  } else {
    trace.points.reserve(rows.size());
    for (const auto& r : rows) trace.points.push_back({r[0], r[1], r[2]});
  }

  for (std::size_t i = 1; i < trace.points.size(); ++i) {
    if (trace.points[i].timestamp <= trace.points[i - 1].timestamp)
      throw DomainError("non-increasing timestamp at row " + std::to_string(i + 1));
  }
  if (trace.points.size() >= 2) {
    trace.sample_period = (trace.points.back().timestamp - trace.points.front().timestamp) /
                          static_cast<double>(trace.points.size() - 1);
  }
  return trace;
}

SegmentationResult segment_trace(const Trace& trace, int segment_size, double max_speed) {
  if (segment_size < 2) throw DomainError("segment_trace: segment_size must be >= 2");

  SegmentationResult result;
  const std::size_t n = trace.points.size();
  const std::size_t windows = n / static_cast<std::size_t>(segment_size);
  if (n % static_cast<std::size_t>(segment_size) != 0 && n > 0) result.dropped_incomplete = 1;

  for (std::size_t w = 0; w < windows; ++w) {
    const std::size_t begin = w * static_cast<std::size_t>(segment_size);
    bool violated = false;
    for (int i = 1; i < segment_size && !violated; ++i) {
      if (point_speed(trace.points[begin + i - 1], trace.points[begin + i]) > max_speed)
        violated = true;
    }
    if (violated) {
      ++result.dropped_speed;
      continue;
    }
    Segment seg;
    seg.points.assign(trace.points.begin() + static_cast<std::ptrdiff_t>(begin),
                      trace.points.begin() + static_cast<std::ptrdiff_t>(begin + segment_size));
    seg.easting_vec.resize(segment_size);
    seg.northing_vec.resize(segment_size);
    for (int i = 0; i < segment_size; ++i) {
      seg.easting_vec[i] = seg.points[static_cast<std::size_t>(i)].easting;
      seg.northing_vec[i] = seg.points[static_cast<std::size_t>(i)].northing;
    }
    seg.easting_mean = seg.easting_vec.mean();
    seg.northing_mean = seg.northing_vec.mean();
    seg.easting_vec.array() -= seg.easting_mean;
    seg.northing_vec.array() -= seg.northing_mean;
    result.segments.push_back(std::move(seg));
  }
  return result;
}

SpeedStats speed_stats(const Segment& segment) {
  if (segment.points.size() < 2) throw DomainError("speed_stats: need at least 2 points");
  std::vector<double> speeds;
  speeds.reserve(segment.points.size() - 1);
  for (std::size_t i = 1; i < segment.points.size(); ++i) {
    const double dt = segment.points[i].timestamp - segment.points[i - 1].timestamp;
    if (dt <= 0.0) throw DomainError("speed_stats: duplicate or non-increasing timestamps");
    speeds.push_back(point_speed(segment.points[i - 1], segment.points[i]));
  }

  SpeedStats s;
  const double k = static_cast<double>(speeds.size());
  for (double v : speeds) s.mean += v;
  s.mean /= k;
  for (double v : speeds) s.variance += (v - s.mean) * (v - s.mean);
  s.variance /= k;
  std::vector<double> sorted = speeds;
  std::sort(sorted.begin(), sorted.end());
  s.minimum = sorted.front();
  s.maximum = sorted.back();
  const std::size_t mid = sorted.size() / 2;
  s.median = (sorted.size() % 2 == 1) ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);
  return s;
}

double ade(const std::vector<Segment>& reference, const std::vector<Segment>& reconstructed) {
  if (reference.size() != reconstructed.size())
    throw DimensionError("ade: segment count mismatch");
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < reference.size(); ++j) {
    const Segment& a = reference[j];
    const Segment& b = reconstructed[j];
    if (a.easting_vec.size() != b.easting_vec.size() ||
        a.northing_vec.size() != b.northing_vec.size())
      throw DimensionError("ade: point count mismatch in segment " + std::to_string(j));
    for (Eigen::Index i = 0; i < a.easting_vec.size(); ++i) {
      const double de = (a.easting_vec[i] + a.easting_mean) - (b.easting_vec[i] + b.easting_mean);
      const double dn =
          (a.northing_vec[i] + a.northing_mean) - (b.northing_vec[i] + b.northing_mean);
      total += std::hypot(de, dn);
      ++count;
    }
  }
  return count == 0 ? 0.0 : total / static_cast<double>(count);
}

}  // namespace simpletrack
