#include "simpletrack/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace simpletrack {

namespace {

using nlohmann::json;

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return j;
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

json matrix_to_json(const Matrix& m) {
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back(m(i, j));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto entries = j.at("entries").get<std::vector<double>>();
  if (rows < 0 || cols < 0 || entries.size() != static_cast<std::size_t>(rows * cols))
    throw ParseError("matrix entry count does not match rows*cols");
  Matrix m(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index jj = 0; jj < cols; ++jj) m(i, jj) = entries[k++];
  return m;
}

std::string digest_hex(std::uint64_t digest) {
  std::ostringstream os;
  os << std::hex << digest;
  return os.str();
}

std::uint64_t digest_from_hex(const std::string& s) {
  return std::stoull(s, nullptr, 16);
}

}  // namespace

void save_matrix(const Matrix& m, const std::filesystem::path& path) {
  write_json(matrix_to_json(m), path);
}

Matrix load_matrix(const std::filesystem::path& path) { return matrix_from_json(read_json(path)); }

void save_dictionary(const Dictionary& dict, const std::filesystem::path& path) {
  json j = matrix_to_json(dict.atoms);
  j["lambda"] = dict.lambda;
  j["d"] = dict.atom_count();
  j["seed"] = dict.seed;
  j["objective_history"] = dict.train_objective_history;
  write_json(j, path);
}

Dictionary load_dictionary(const std::filesystem::path& path) {
  const json j = read_json(path);
  Dictionary dict;
  dict.atoms = matrix_from_json(j);
  dict.lambda = j.at("lambda").get<double>();
  dict.seed = j.at("seed").get<std::uint64_t>();
  dict.train_objective_history = j.at("objective_history").get<std::vector<double>>();
  return dict;
}

void save_projection(const ProjectionMatrix& proj, const std::filesystem::path& path) {
  json j{{"method", to_string(proj.method)},
         {"m_max", proj.m_max()},
         {"matrix", matrix_to_json(proj.phi)},
         {"source_dictionary_hash", digest_hex(proj.source_dictionary_hash)}};
  if (proj.seed.has_value())
    j["seed"] = *proj.seed;
  else
    j["seed"] = nullptr;
  write_json(j, path);
}

ProjectionMatrix load_projection(const std::filesystem::path& path) {
  const json j = read_json(path);
  ProjectionMatrix proj;
  proj.method = projection_method_from_string(j.at("method").get<std::string>());
  proj.phi = matrix_from_json(j.at("matrix"));
  proj.source_dictionary_hash = digest_from_hex(j.at("source_dictionary_hash").get<std::string>());
  if (!j.at("seed").is_null()) proj.seed = j.at("seed").get<std::uint64_t>();
  return proj;
}

void save_svr_model(const SvrModel& model, const std::filesystem::path& path) {
  write_json(json{{"support_vectors", model.support_vectors},
                  {"dual_coefficients", model.dual_coefficients},
                  {"bias", model.bias},
                  {"gamma", model.kernel_gamma},
                  {"c", model.c},
                  {"epsilon_tube", model.epsilon_tube}},
             path);
}

SvrModel load_svr_model(const std::filesystem::path& path) {
  const json j = read_json(path);
  SvrModel model;
  model.support_vectors = j.at("support_vectors").get<std::vector<double>>();
  model.dual_coefficients = j.at("dual_coefficients").get<std::vector<double>>();
  model.bias = j.at("bias").get<double>();
  model.kernel_gamma = j.at("gamma").get<double>();
  model.c = j.at("c").get<double>();
  model.epsilon_tube = j.at("epsilon_tube").get<double>();
  return model;
}

void save_lookup_table(const LookupTable& table, const std::filesystem::path& path) {
  json bins = json::array();
  for (const LookupTable::Entry& e : table.entries)
    bins.push_back({{"speed_ub", e.speed_ub}, {"m", e.projections}});
  write_json(json{{"bins", bins}, {"m_max", table.m_max}}, path);
}

LookupTable load_lookup_table(const std::filesystem::path& path) {
  const json j = read_json(path);
  LookupTable table;
  table.m_max = j.at("m_max").get<int>();
  for (const auto& b : j.at("bins"))
    table.entries.push_back({b.at("speed_ub").get<double>(), b.at("m").get<int>()});
  return table;
}

}  // namespace simpletrack
