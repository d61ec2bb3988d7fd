#include "simpletrack/codec.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "simpletrack/reconstruct.hpp"

namespace simpletrack {

namespace {

constexpr char kMagic[8] = {'S', 'T', 'R', 'K', '0', '0', '0', '1'};

static_assert(std::endian::native == std::endian::little,
              "wire format assumes a little-endian host");

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T get(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof value);
  if (!in) throw IoError("encoded file truncated");
  return value;
}

}  // namespace

NodeState make_node_state(const ProjectionMatrix& proj, const LookupTable& lookup) {
  if (proj.method != ProjectionMethod::SvdTopM)
    throw ModelMismatchError("node state requires an svd-top-m projection matrix");
  NodeState state;
  state.u_tilde = proj.phi;
  state.lookup = lookup;
  state.m_max = proj.m_max();
  return state;
}

EncodedSegment encode_segment(const Segment& segment, const NodeState& state,
                              std::uint16_t segment_index) {
  if (segment.easting_vec.size() != state.u_tilde.cols())
    throw DimensionError("encode_segment: segment length does not match node state");

  // speed from the raw (pre-mean-subtraction) points, as observed on the node
  const double mean_speed = speed_stats(segment).mean;
  const int m = state.lookup.lookup(mean_speed);

  EncodedSegment out;
  out.m = m;
  out.segment_index = segment_index;
  out.y_easting = state.u_tilde.topRows(m) * segment.easting_vec;
  out.y_northing = state.u_tilde.topRows(m) * segment.northing_vec;
  out.easting_mean = segment.easting_mean;
  out.northing_mean = segment.northing_mean;
  return out;
}

Segment decode_segment(const EncodedSegment& encoded, const Dictionary& dict,
                       const ProjectionMatrix& proj, double epsilon, double sample_period) {
  if (proj.method != ProjectionMethod::SvdTopM ||
      proj.source_dictionary_hash != dict.digest())
    throw ModelMismatchError("decode_segment: projection does not match dictionary");
  if (encoded.m < 1 || encoded.m > proj.m_max())
    throw DimensionError("decode_segment: m out of range");

  const Matrix phi = proj.phi.topRows(encoded.m);
  auto recon = [&](const Vector& y) {
    SensingProblem p;
    p.phi = phi;
    p.psi = dict.atoms;
    p.y = y;
    p.epsilon = epsilon;
    return solve_l1(p).x_hat;
  };

  Segment seg;
  seg.easting_vec = recon(encoded.y_easting);
  seg.northing_vec = recon(encoded.y_northing);
  seg.easting_mean = encoded.easting_mean;
  seg.northing_mean = encoded.northing_mean;
  seg.points.resize(static_cast<std::size_t>(seg.easting_vec.size()));
  for (std::size_t i = 0; i < seg.points.size(); ++i) {
    seg.points[i].timestamp = static_cast<double>(i) * sample_period;
    seg.points[i].easting = seg.easting_vec[static_cast<Eigen::Index>(i)] + seg.easting_mean;
    seg.points[i].northing = seg.northing_vec[static_cast<Eigen::Index>(i)] + seg.northing_mean;
  }
  return seg;
}

void write_encoded_file(const std::filesystem::path& path,
                        const std::vector<EncodedSegment>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof kMagic);
  for (const EncodedSegment& r : records) {
    put<std::uint16_t>(out, r.segment_index);
    put<std::uint16_t>(out, static_cast<std::uint16_t>(r.m));
    put<double>(out, r.easting_mean);
    put<double>(out, r.northing_mean);
    for (int i = 0; i < r.m; ++i) put<double>(out, r.y_easting[i]);
    for (int i = 0; i < r.m; ++i) put<double>(out, r.y_northing[i]);
  }
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<EncodedSegment> read_encoded_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw ParseError("bad magic in " + path.string());

  std::vector<EncodedSegment> records;
  while (in.peek() != std::ifstream::traits_type::eof()) {
    EncodedSegment r;
    r.segment_index = get<std::uint16_t>(in);
    r.m = get<std::uint16_t>(in);
    r.easting_mean = get<double>(in);
    r.northing_mean = get<double>(in);
    r.y_easting.resize(r.m);
    r.y_northing.resize(r.m);
    for (int i = 0; i < r.m; ++i) r.y_easting[i] = get<double>(in);
    for (int i = 0; i < r.m; ++i) r.y_northing[i] = get<double>(in);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace simpletrack
