#pragma once

#include <filesystem>

#include "simpletrack/adaptive.hpp"
#include "simpletrack/dictionary.hpp"
#include "simpletrack/numerics.hpp"
#include "simpletrack/projection.hpp"

namespace simpletrack {

// Matrix JSON: {rows, cols, entries: flat row-major array}.
// Dictionary JSON: matrix plus {lambda, d, seed, objective_history}.
// ProjectionMatrix JSON: {method, seed, m_max, matrix, source_dictionary_hash}.
// SvrModel JSON: {support_vectors, dual_coefficients, bias, gamma, c, epsilon_tube}.
// LookupTable JSON: {bins: [{speed_ub, m}], m_max}.

void save_matrix(const Matrix& m, const std::filesystem::path& path);
Matrix load_matrix(const std::filesystem::path& path);

void save_dictionary(const Dictionary& dict, const std::filesystem::path& path);
Dictionary load_dictionary(const std::filesystem::path& path);

void save_projection(const ProjectionMatrix& proj, const std::filesystem::path& path);
ProjectionMatrix load_projection(const std::filesystem::path& path);

void save_svr_model(const SvrModel& model, const std::filesystem::path& path);
SvrModel load_svr_model(const std::filesystem::path& path);

void save_lookup_table(const LookupTable& table, const std::filesystem::path& path);
LookupTable load_lookup_table(const std::filesystem::path& path);

}  // namespace simpletrack
