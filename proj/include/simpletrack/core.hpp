#pragma once

#include <filesystem>
#include <vector>

#include "simpletrack/numerics.hpp"

namespace simpletrack {

struct GpsPoint {
  double timestamp = 0.0;  // seconds since epoch
  double latitude = 0.0;   // degrees
  double longitude = 0.0;  // degrees
};

struct MetricPoint {
  double timestamp = 0.0;  // seconds
  double easting = 0.0;    // metres
  double northing = 0.0;   // metres
};

struct Trace {
  std::vector<MetricPoint> points;  // timestamps strictly increasing
  double sample_period = 1.0;       // nominal, seconds
};

/// Fixed-length window of a trace. easting_vec/northing_vec hold the
/// mean-subtracted coordinates; the means ride along for reconstruction.
struct Segment {
  std::vector<MetricPoint> points;  // raw positions, pre mean-subtraction
  Vector easting_vec;
  Vector northing_vec;
  double easting_mean = 0.0;
  double northing_mean = 0.0;
};

struct SpeedStats {
  double mean = 0.0;
  double variance = 0.0;
  double median = 0.0;
  double maximum = 0.0;
  double minimum = 0.0;
};

enum class CsvFormat { LatLon, Metric };

constexpr double kEarthRadiusMetres = 6371000.0;

/// Equirectangular local tangent-plane conversion anchored at `reference`:
/// easting = R cos(lat_ref) dlon, northing = R dlat (radians).
std::vector<MetricPoint> to_local_metres(const std::vector<GpsPoint>& points,
                                         const GpsPoint& reference);

/// Reads `t,lat,lon` or `t,e,n` CSV. Lat-lon rows are converted to metres
/// using the first row as reference.
Trace ingest_csv(const std::filesystem::path& path, CsvFormat format);

struct SegmentationResult {
  std::vector<Segment> segments;
  int dropped_speed = 0;       // windows with an inter-point speed violation
  int dropped_incomplete = 0;  // 0 or 1 trailing partial window
};

/// Non-overlapping consecutive windows of `segment_size` points. Windows with
/// any inter-point speed above `max_speed` are dropped whole; the trailing
/// incomplete window is dropped.
SegmentationResult segment_trace(const Trace& trace, int segment_size, double max_speed);

SpeedStats speed_stats(const Segment& segment);

/// Average Distance Error between two segment sequences, in metres:
/// mean over all points of the Euclidean distance after re-adding the
/// per-segment means.
double ade(const std::vector<Segment>& reference, const std::vector<Segment>& reconstructed);

}  // namespace simpletrack
