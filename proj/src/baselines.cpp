#include "simpletrack/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace simpletrack {

double sed(const MetricPoint& point, const MetricPoint& predecessor,
           const MetricPoint& successor) {
  if (!(predecessor.timestamp < point.timestamp && point.timestamp < successor.timestamp))
    throw DomainError("sed: timestamps must satisfy pred < point < succ");
  const double span = successor.timestamp - predecessor.timestamp;
  const double w = (point.timestamp - predecessor.timestamp) / span;
  const double e = predecessor.easting + w * (successor.easting - predecessor.easting);
  const double n = predecessor.northing + w * (successor.northing - predecessor.northing);
  return std::hypot(point.easting - e, point.northing - n);
}

std::vector<MetricPoint> squish_compress(const std::vector<MetricPoint>& trace, int beta) {
  if (beta < 2) throw DomainError("squish_compress: beta must be >= 2");
  if (trace.size() <= static_cast<std::size_t>(beta)) return trace;

  struct Entry {
    MetricPoint p;
    double accumulated = 0.0;  // priorities inherited from evicted neighbours
  };
  std::vector<Entry> buf;
  buf.reserve(static_cast<std::size_t>(beta) + 1);

  auto priority = [&buf](std::size_t i) {
    // interior points only; endpoints are pinned
    return buf[i].accumulated + sed(buf[i].p, buf[i - 1].p, buf[i + 1].p);
  };

  for (const MetricPoint& p : trace) {
    buf.push_back({p, 0.0});
    if (buf.size() <= static_cast<std::size_t>(beta)) continue;

    std::size_t victim = 0;
    double victim_priority = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < buf.size(); ++i) {
      const double pr = priority(i);
      if (pr < victim_priority) {
        victim_priority = pr;
        victim = i;
      }
    }
    buf[victim - 1].accumulated += victim_priority;
    buf[victim + 1].accumulated += victim_priority;
    buf.erase(buf.begin() + static_cast<std::ptrdiff_t>(victim));
  }

  std::vector<MetricPoint> out;
  out.reserve(buf.size());
  for (const Entry& e : buf) out.push_back(e.p);
  return out;
}

std::vector<MetricPoint> squish_decompress(const std::vector<MetricPoint>& kept,
                                           const std::vector<double>& timestamps) {
  if (kept.empty()) throw DomainError("squish_decompress: no kept points");
  std::vector<MetricPoint> out;
  out.reserve(timestamps.size());
  for (double t : timestamps) {
    if (t < kept.front().timestamp || t > kept.back().timestamp)
      throw DomainError("squish_decompress: timestamp outside kept span");
    const auto it = std::lower_bound(
        kept.begin(), kept.end(), t,
        [](const MetricPoint& p, double time) { return p.timestamp < time; });
    if (it == kept.begin() || it->timestamp == t) {
      out.push_back({t, it->easting, it->northing});
      continue;
    }
    const MetricPoint& b = *it;
    const MetricPoint& a = *(it - 1);
    const double w = (t - a.timestamp) / (b.timestamp - a.timestamp);
    out.push_back({t, a.easting + w * (b.easting - a.easting),
                   a.northing + w * (b.northing - a.northing)});
  }
  return out;
}

}  // namespace simpletrack
