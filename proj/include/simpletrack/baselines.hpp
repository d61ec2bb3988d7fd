#pragma once

#include <vector>

#include "simpletrack/core.hpp"

namespace simpletrack {

/// Synchronous Euclidean distance: distance from `point` to the position
/// interpolated between predecessor and successor at `point`'s timestamp.
double sed(const MetricPoint& point, const MetricPoint& predecessor,
           const MetricPoint& successor);

/// Streaming SQUISH pass with a buffer of at most `beta` points. On overflow
/// the minimum-priority interior point is evicted and its priority added to
/// both temporal neighbours; the first and last points are never evicted.
/// Output is a subsequence of the input in time order.
std::vector<MetricPoint> squish_compress(const std::vector<MetricPoint>& trace, int beta);

/// Linear interpolation in time through the kept points at the requested
/// timestamps, which must lie within the kept span.
std::vector<MetricPoint> squish_decompress(const std::vector<MetricPoint>& kept,
                                           const std::vector<double>& timestamps);

}  // namespace simpletrack
