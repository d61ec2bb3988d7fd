#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "simpletrack/model_io.hpp"
#include "simpletrack/rng.hpp"

using namespace simpletrack;
namespace fs = std::filesystem;

namespace {

Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
  return m;
}

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / name; }

}  // namespace

TEST_CASE("matrix json round trip") {
  const Matrix m = random_matrix(3, 5, 1);
  const fs::path p = tmp("st_matrix.json");
  save_matrix(m, p);
  CHECK((load_matrix(p) - m).norm() == 0.0);
}

TEST_CASE("dictionary round trip preserves digest and metadata") {
  Dictionary d;
  d.atoms = random_matrix(4, 8, 2);
  d.lambda = 0.125;
  d.seed = 42;
  d.train_objective_history = {3.0, 2.5, 2.25};
  const fs::path p = tmp("st_dict.json");
  save_dictionary(d, p);
  const Dictionary back = load_dictionary(p);
  CHECK(back.digest() == d.digest());
  CHECK(back.lambda == d.lambda);
  CHECK(back.seed == d.seed);
  CHECK(back.train_objective_history == d.train_objective_history);
}

TEST_CASE("projection round trip with and without a seed") {
  Dictionary d;
  d.atoms = random_matrix(6, 12, 3);
  const ProjectionMatrix topm = svd_topm_matrix(d, 4);
  const fs::path p = tmp("st_proj.json");
  save_projection(topm, p);
  const ProjectionMatrix back = load_projection(p);
  CHECK(back.method == ProjectionMethod::SvdTopM);
  CHECK(!back.seed.has_value());
  CHECK(back.source_dictionary_hash == d.digest());
  CHECK((back.phi - topm.phi).norm() == 0.0);

  const ProjectionMatrix g = gaussian_matrix(4, 6, 99);
  save_projection(g, p);
  const ProjectionMatrix gb = load_projection(p);
  REQUIRE(gb.seed.has_value());
  CHECK(*gb.seed == 99);
  CHECK(gb.method == ProjectionMethod::Gaussian);
}

TEST_CASE("svr model round trip") {
  SvrModel m;
  m.support_vectors = {0.5, 1.5};
  m.dual_coefficients = {2.0, -1.0};
  m.bias = 0.75;
  m.kernel_gamma = 10.0;
  m.c = 100.0;
  m.epsilon_tube = 0.5;
  const fs::path p = tmp("st_svr.json");
  save_svr_model(m, p);
  const SvrModel back = load_svr_model(p);
  CHECK(back.support_vectors == m.support_vectors);
  CHECK(back.dual_coefficients == m.dual_coefficients);
  CHECK(back.bias == m.bias);
  CHECK(back.kernel_gamma == m.kernel_gamma);
  CHECK(back.c == m.c);
  CHECK(back.epsilon_tube == m.epsilon_tube);
}

TEST_CASE("lookup table round trip") {
  LookupTable t;
  t.m_max = 47;
  t.entries = {{0.5, 3}, {1.0, 9}, {1.5, 20}};
  const fs::path p = tmp("st_lut.json");
  save_lookup_table(t, p);
  const LookupTable back = load_lookup_table(p);
  CHECK(back.m_max == 47);
  REQUIRE(back.entries.size() == 3);
  CHECK(back.entries[1].speed_ub == 1.0);
  CHECK(back.entries[1].projections == 9);
  CHECK(back.lookup(1.2) == 20);
}

TEST_CASE("error mapping") {
  CHECK_THROWS_AS(load_matrix("/nonexistent/m.json"), IoError);
  const fs::path p = tmp("st_garbage.json");
  std::ofstream(p) << "{not json";
  CHECK_THROWS_AS(load_matrix(p), ParseError);
  std::ofstream(p) << "{\"rows\": 2, \"cols\": 2, \"entries\": [1.0]}";
  CHECK_THROWS_AS(load_matrix(p), ParseError);
}
