#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "simpletrack/adaptive.hpp"
#include "simpletrack/core.hpp"
#include "simpletrack/projection.hpp"

namespace simpletrack {

/// Everything a node carries: the m_max x n projection rows (transposed
/// left-most columns of U) and the speed look-up table.
struct NodeState {
  Matrix u_tilde;  // m_max x n, rows orthonormal
  LookupTable lookup;
  int m_max = 1;
};

NodeState make_node_state(const ProjectionMatrix& proj, const LookupTable& lookup);

struct EncodedSegment {
  int m = 0;
  Vector y_easting;
  Vector y_northing;
  double easting_mean = 0.0;
  double northing_mean = 0.0;
  std::uint16_t segment_index = 0;
};

/// Node-side encoding: mean speed -> m from the table, then y = U_m^T x for
/// each coordinate with the same first-m rows.
EncodedSegment encode_segment(const Segment& segment, const NodeState& state,
                              std::uint16_t segment_index = 0);

/// Sink-side decoding: one l1 solve per coordinate with Phi = first m rows
/// and Psi = D, then the segment mean is re-added. The projection matrix must
/// be the svd-top-m construction from the same dictionary. Timestamps are
/// synthetic at the nominal sample period.
Segment decode_segment(const EncodedSegment& encoded, const Dictionary& dict,
                       const ProjectionMatrix& proj, double epsilon,
                       double sample_period = 1.0);

// Wire container: 8-byte magic "STRK0001", then per record (little-endian):
// u16 segment_index, u16 m, f64 easting_mean, f64 northing_mean,
// m f64 easting projections, m f64 northing projections.
void write_encoded_file(const std::filesystem::path& path,
                        const std::vector<EncodedSegment>& records);
std::vector<EncodedSegment> read_encoded_file(const std::filesystem::path& path);

}  // namespace simpletrack
