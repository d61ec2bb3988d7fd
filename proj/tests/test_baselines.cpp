#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <list>
#include <vector>

#include "simpletrack/baselines.hpp"
#include "simpletrack/rng.hpp"

using namespace simpletrack;

namespace {

// Straightforward list-based re-implementation of the eviction procedure,
// kept deliberately naive as an oracle.
std::vector<MetricPoint> squish_oracle(const std::vector<MetricPoint>& trace, int beta) {
  struct Node {
    MetricPoint p;
    double accumulated = 0.0;
  };
  std::list<Node> buffer;
  for (const MetricPoint& p : trace) {
    buffer.push_back({p, 0.0});
    if (static_cast<int>(buffer.size()) > beta) {
      // find the interior node of minimal accumulated + SED priority
      auto victim = buffer.end();
      double best = std::numeric_limits<double>::infinity();
      for (auto it = std::next(buffer.begin()); std::next(it) != buffer.end(); ++it) {
        const double pr = it->accumulated + sed(it->p, std::prev(it)->p, std::next(it)->p);
        if (pr < best) {
          best = pr;
          victim = it;
        }
      }
      std::prev(victim)->accumulated += best;
      std::next(victim)->accumulated += best;
      buffer.erase(victim);
    }
  }
  std::vector<MetricPoint> out;
  for (const Node& n : buffer) out.push_back(n.p);
  return out;
}

bool same_points(const std::vector<MetricPoint>& a, const std::vector<MetricPoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].timestamp != b[i].timestamp || a[i].easting != b[i].easting ||
        a[i].northing != b[i].northing)
      return false;
  return true;
}

}  // namespace

TEST_CASE("sed") {
  SUBCASE("point on the constant-velocity line") {
    const MetricPoint pred{0.0, 0.0, 0.0};
    const MetricPoint succ{4.0, 8.0, 4.0};
    const MetricPoint p{1.0, 2.0, 1.0};
    CHECK(sed(p, pred, succ) == doctest::Approx(0.0).scale(1.0));
  }

  SUBCASE("unit offset from the interpolated position") {
    const MetricPoint pred{0.0, 0.0, 0.0};
    const MetricPoint succ{2.0, 2.0, 0.0};
    const MetricPoint p{1.0, 1.0, 1.0};
    CHECK(sed(p, pred, succ) == doctest::Approx(1.0));
  }

  SUBCASE("co-located neighbours degenerate to point distance") {
    const MetricPoint pred{0.0, 3.0, 4.0};
    const MetricPoint succ{2.0, 3.0, 4.0};
    const MetricPoint p{1.0, 3.0, 4.0};
    CHECK(sed(p, pred, succ) == doctest::Approx(0.0));
  }

  SUBCASE("timestamp ordering enforced") {
    const MetricPoint pred{2.0, 0.0, 0.0};
    const MetricPoint succ{0.0, 1.0, 0.0};
    const MetricPoint p{1.0, 0.5, 0.0};
    CHECK_THROWS_AS(sed(p, pred, succ), DomainError);
  }
}

TEST_CASE("squish_compress") {
  SUBCASE("large beta is lossless") {
    std::vector<MetricPoint> trace;
    Rng rng(1);
    for (int i = 0; i < 12; ++i)
      trace.push_back({static_cast<double>(i), rng.gaussian(), rng.gaussian()});
    CHECK(same_points(squish_compress(trace, 12), trace));
    CHECK(same_points(squish_compress(trace, 50), trace));
  }

  SUBCASE("collinear constant-speed trace collapses to the endpoints") {
    std::vector<MetricPoint> trace;
    for (int i = 0; i < 10; ++i) trace.push_back({static_cast<double>(i), 2.0 * i, -1.0 * i});
    const std::vector<MetricPoint> kept = squish_compress(trace, 2);
    REQUIRE(kept.size() == 2);
    CHECK(same_points({trace.front(), trace.back()}, kept));

    std::vector<double> stamps;
    for (const MetricPoint& p : trace) stamps.push_back(p.timestamp);
    const std::vector<MetricPoint> full = squish_decompress(kept, stamps);
    for (std::size_t i = 0; i < trace.size(); ++i) {
      CHECK(full[i].easting == doctest::Approx(trace[i].easting).epsilon(1e-12));
      CHECK(full[i].northing == doctest::Approx(trace[i].northing).epsilon(1e-12));
    }
  }

  SUBCASE("20-point trace matches the step-by-step oracle") {
    Rng rng(9);
    std::vector<MetricPoint> trace;
    double e = 0.0, n = 0.0;
    for (int i = 0; i < 20; ++i) {
      trace.push_back({static_cast<double>(i), e, n});
      e += rng.gaussian();
      n += rng.gaussian();
    }
    CHECK(same_points(squish_compress(trace, 8), squish_oracle(trace, 8)));
  }

  SUBCASE("output is a time-ordered subsequence with pinned endpoints") {
    Rng rng(14);
    std::vector<MetricPoint> trace;
    for (int i = 0; i < 30; ++i)
      trace.push_back({static_cast<double>(i), rng.gaussian() * 3.0, rng.gaussian() * 3.0});
    const std::vector<MetricPoint> kept = squish_compress(trace, 6);
    CHECK(kept.size() == 6);
    CHECK(kept.front().timestamp == trace.front().timestamp);
    CHECK(kept.back().timestamp == trace.back().timestamp);
    for (std::size_t i = 1; i < kept.size(); ++i)
      CHECK(kept[i].timestamp > kept[i - 1].timestamp);
  }

  SUBCASE("beta below 2 rejected") {
    std::vector<MetricPoint> trace = {{0, 0, 0}, {1, 1, 1}};
    CHECK_THROWS_AS(squish_compress(trace, 1), DomainError);
  }
}

TEST_CASE("squish_decompress") {
  const std::vector<MetricPoint> kept = {{0.0, 0.0, 0.0}, {2.0, 4.0, 2.0}, {6.0, 0.0, 10.0}};

  SUBCASE("knot timestamps return the kept points") {
    const auto out = squish_decompress(kept, {0.0, 2.0, 6.0});
    CHECK(same_points(out, kept));
  }

  SUBCASE("midpoints are coordinate-wise averages") {
    const auto out = squish_decompress(kept, {1.0, 4.0});
    CHECK(out[0].easting == doctest::Approx(2.0));
    CHECK(out[0].northing == doctest::Approx(1.0));
    CHECK(out[1].easting == doctest::Approx(2.0));
    CHECK(out[1].northing == doctest::Approx(6.0));
  }

  SUBCASE("dense grid matches a per-interval lerp oracle") {
    std::vector<double> stamps;
    for (int i = 0; i <= 60; ++i) stamps.push_back(6.0 * i / 60.0);
    const auto out = squish_decompress(kept, stamps);
    for (std::size_t k = 0; k < stamps.size(); ++k) {
      const double t = stamps[k];
      const MetricPoint& a = t <= 2.0 ? kept[0] : kept[1];
      const MetricPoint& b = t <= 2.0 ? kept[1] : kept[2];
      const double w = (t - a.timestamp) / (b.timestamp - a.timestamp);
      CHECK(out[k].easting ==
            doctest::Approx(a.easting + w * (b.easting - a.easting)).epsilon(1e-12));
      CHECK(out[k].northing ==
            doctest::Approx(a.northing + w * (b.northing - a.northing)).epsilon(1e-12));
    }
  }

  SUBCASE("timestamps outside the kept span rejected") {
    CHECK_THROWS_AS(squish_decompress(kept, {-0.5}), DomainError);
    CHECK_THROWS_AS(squish_decompress(kept, {6.5}), DomainError);
  }
}
