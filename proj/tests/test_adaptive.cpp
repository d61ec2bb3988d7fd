#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "simpletrack/adaptive.hpp"
#include "simpletrack/reconstruct.hpp"
#include "simpletrack/rng.hpp"

using namespace simpletrack;

namespace {

// Identity-dictionary fixture: decoding with the first m rows of I keeps the
// first m coordinates and zeroes the rest, so the planted support length is
// exactly the required projection count.
struct IdentityFixture {
  Dictionary dict;
  ProjectionMatrix proj;

  explicit IdentityFixture(int n) {
    dict.atoms = Matrix::Identity(n, n);
    proj = svd_topm_matrix(dict, n);
  }
};

Segment planted_segment(const Vector& easting, const Vector& northing, double speed) {
  Segment s;
  s.easting_vec = easting;
  s.northing_vec = northing;
  for (Eigen::Index i = 0; i < easting.size(); ++i)
    s.points.push_back({static_cast<double>(i), speed * static_cast<double>(i), 0.0});
  return s;
}

// Linear-scan oracle mirroring the library's probe error definition.
int linear_scan_min_m(const Segment& seg, const ProjectionMatrix& proj, const Dictionary& dict,
                      double xi, int m_max) {
  for (int m = 1; m <= m_max; ++m) {
    const Matrix phi = proj.phi.topRows(m);
    auto recon = [&](const Vector& x) {
      SensingProblem p;
      p.phi = phi;
      p.psi = dict.atoms;
      p.y = phi * x;
      p.epsilon = 1e-6 * p.y.norm();
      return solve_l1(p).x_hat;
    };
    const Vector e = recon(seg.easting_vec);
    const Vector n = recon(seg.northing_vec);
    double err = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i)
      err += std::hypot(seg.easting_vec[i] - e[i], seg.northing_vec[i] - n[i]);
    err /= static_cast<double>(e.size());
    if (err <= xi) return m;
  }
  return m_max;
}

}  // namespace

TEST_CASE("LookupTable::lookup") {
  LookupTable t;
  t.m_max = 40;
  t.entries = {{1.0, 5}, {2.0, 9}, {3.0, 20}};
  CHECK(t.lookup(0.0) == 5);
  CHECK(t.lookup(1.0) == 5);
  CHECK(t.lookup(1.5) == 9);
  CHECK(t.lookup(2.5) == 20);
  CHECK(t.lookup(99.0) == 40);  // above the last bound
}

TEST_CASE("min_projections_for_error") {
  const int n = 16;
  IdentityFixture fx(n);

  SUBCASE("zero segment needs one projection") {
    const Segment s = planted_segment(Vector::Zero(n), Vector::Zero(n), 1.0);
    const MinProjResult r = min_projections_for_error(s, fx.proj, fx.dict, 0.5, n);
    CHECK(r.m == 1);
    CHECK(!r.saturated);
  }

  SUBCASE("huge tolerance needs one projection") {
    Vector e = Vector::Zero(n);
    e[5] = 100.0;
    const Segment s = planted_segment(e, Vector::Zero(n), 1.0);
    const MinProjResult r = min_projections_for_error(s, fx.proj, fx.dict, 1e9, n);
    CHECK(r.m == 1);
  }

  SUBCASE("planted profiles match the linear-scan oracle") {
    Rng rng(5);
    for (int trial = 0; trial < 6; ++trial) {
      // support confined to the first k coordinates forces m = k
      const int k = 2 + static_cast<int>(rng.next_index(10));
      Vector e = Vector::Zero(n), nn = Vector::Zero(n);
      for (int i = 0; i < k; ++i) {
        e[i] = 10.0 + rng.uniform();
        nn[i] = 10.0 + rng.uniform();
      }
      const Segment s = planted_segment(e, nn, 1.0);
      const MinProjResult r = min_projections_for_error(s, fx.proj, fx.dict, 0.5, n);
      CHECK(r.m == linear_scan_min_m(s, fx.proj, fx.dict, 0.5, n));
      CHECK(r.m == k);
    }
  }

  SUBCASE("saturation is flagged when even m_max misses") {
    Vector e = Vector::Zero(n);
    for (int i = 0; i < n; ++i) e[i] = 100.0 * std::pow(-1.0, i);
    const Segment s = planted_segment(e, Vector::Zero(n), 1.0);
    const MinProjResult r = min_projections_for_error(s, fx.proj, fx.dict, 0.5, 4);
    CHECK(r.saturated);
    CHECK(r.m == 4);
  }

  SUBCASE("parameter validation") {
    const Segment s = planted_segment(Vector::Zero(n), Vector::Zero(n), 1.0);
    CHECK_THROWS_AS(min_projections_for_error(s, fx.proj, fx.dict, 0.0, n), DomainError);
    CHECK_THROWS_AS(min_projections_for_error(s, fx.proj, fx.dict, 0.5, n + 1), DomainError);
  }
}

TEST_CASE("pearson_correlation") {
  SUBCASE("exact linear relation") {
    const std::vector<double> xs = {1, 2, 3, 4, 5};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(2.0 * x + 3.0);
    CHECK(pearson_correlation(xs, ys) == doctest::Approx(1.0));
  }

  SUBCASE("exact inverse relation") {
    const std::vector<double> xs = {1, 2, 3, 4};
    std::vector<double> ys;
    for (double x : xs) ys.push_back(-x);
    CHECK(pearson_correlation(xs, ys) == doctest::Approx(-1.0));
  }

  SUBCASE("five-point fixture against the hand-computed value") {
    const std::vector<double> xs = {1, 2, 3, 4, 5};
    const std::vector<double> ys = {2, 1, 4, 3, 5};
    // means 3 and 3; covariance sum 8; sum squares 10 and 10
    CHECK(pearson_correlation(xs, ys) == doctest::Approx(8.0 / 10.0));
  }

  SUBCASE("constant input is undefined") {
    CHECK_THROWS_AS(pearson_correlation({1, 1, 1}, {1, 2, 3}), DomainError);
  }
}

TEST_CASE("svr_train and svr_predict") {
  SUBCASE("identical speeds give a bias-only mean fit") {
    const std::vector<TrainingPair> pairs = {{2.0, 4}, {2.0, 6}, {2.0, 8}};
    const SvrModel m = svr_train(pairs, 10.0, 1.0, 0.5);
    CHECK(m.support_vectors.empty());
    CHECK(m.bias == doctest::Approx(6.0));
    CHECK(svr_predict(m, 0.0) == doctest::Approx(6.0));
    CHECK(svr_predict(m, 100.0) == doctest::Approx(6.0));
  }

  SUBCASE("single support vector evaluates the RBF self-similarity") {
    SvrModel m;
    m.bias = 1.0;
    m.kernel_gamma = 2.5;
    m.support_vectors = {3.0};
    m.dual_coefficients = {0.7};
    // k(x, x) = 1 at zero distance
    CHECK(svr_predict(m, 3.0) == doctest::Approx(1.7));
  }

  SUBCASE("noiseless line is fit within the epsilon tube") {
    std::vector<TrainingPair> pairs;
    for (int i = 0; i < 20; ++i)
      pairs.push_back({0.1 * i, 2 + i});  // targets 2..21 on a line
    const SvrModel m = svr_train(pairs, 1000.0, 1.0, 0.5);
    for (const TrainingPair& p : pairs)
      CHECK(std::abs(svr_predict(m, p.speed_stat) - p.min_projections) <= 0.5 + 1e-3);
  }

  SUBCASE("prediction is continuous") {
    std::vector<TrainingPair> pairs = {{0.0, 1}, {1.0, 5}, {2.0, 9}};
    const SvrModel m = svr_train(pairs, 10.0, 1.0, 0.5);
    CHECK(std::abs(svr_predict(m, 1.3) - svr_predict(m, 1.3 + 1e-9)) <= 1e-6);
  }

  SUBCASE("parameter validation") {
    const std::vector<TrainingPair> pairs = {{0.0, 1}, {1.0, 2}};
    CHECK_THROWS_AS(svr_train(pairs, -1.0, 1.0, 0.5), DomainError);
    CHECK_THROWS_AS(svr_train(pairs, 1.0, 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(svr_train({{0.0, 1}}, 1.0, 1.0, 0.5), DomainError);
  }
}

TEST_CASE("svr_train_cv fits a simple monotone relation") {
  std::vector<TrainingPair> pairs;
  Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    const double s = 0.05 * i;
    pairs.push_back({s, static_cast<int>(std::lround(3.0 + 10.0 * s))});
  }
  const SvrModel m = svr_train_cv(pairs, 1);
  double rmse = 0.0;
  for (const TrainingPair& p : pairs) {
    const double e = svr_predict(m, p.speed_stat) - p.min_projections;
    rmse += e * e;
  }
  rmse = std::sqrt(rmse / pairs.size());
  CHECK(rmse <= 2.0);

  // deterministic given the seed
  const SvrModel again = svr_train_cv(pairs, 1);
  CHECK(m.bias == again.bias);
  CHECK(m.c == again.c);
  CHECK(m.kernel_gamma == again.kernel_gamma);
}

TEST_CASE("build_lookup_table") {
  SUBCASE("constant model ceilings every bin") {
    SvrModel m;
    m.bias = 5.4;
    const LookupTable t = build_lookup_table(m, 0.0, 2.0, 100, 40);
    CHECK(t.entries.size() == 100);
    for (const auto& e : t.entries) CHECK(e.projections == 6);
    CHECK(t.m_max == 40);
  }

  SUBCASE("bounds are increasing and clamp to [1, m_max]") {
    SvrModel lo;
    lo.bias = -3.0;
    const LookupTable t = build_lookup_table(lo, 0.0, 1.0, 10, 8);
    for (std::size_t i = 1; i < t.entries.size(); ++i)
      CHECK(t.entries[i].speed_ub > t.entries[i - 1].speed_ub);
    for (const auto& e : t.entries) CHECK(e.projections == 1);

    SvrModel hi;
    hi.bias = 99.0;
    const LookupTable u = build_lookup_table(hi, 0.0, 1.0, 10, 8);
    for (const auto& e : u.entries) CHECK(e.projections == 8);
  }

  SUBCASE("query above the covered range returns m_max") {
    SvrModel m;
    m.bias = 2.0;
    const LookupTable t = build_lookup_table(m, 0.0, 1.0, 4, 12);
    CHECK(t.lookup(5.0) == 12);
  }

  SUBCASE("parameter validation") {
    SvrModel m;
    CHECK_THROWS_AS(build_lookup_table(m, 0.0, 1.0, 0, 8), DomainError);
    CHECK_THROWS_AS(build_lookup_table(m, 1.0, 1.0, 4, 8), DomainError);
  }
}
