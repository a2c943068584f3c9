#include "vortexflow/snapshot.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "vortexflow/errors.hpp"

namespace vortexflow {

namespace {

constexpr char kMagic[4] = {'V', 'F', '2', 'D'};

template <typename T>
void put(std::vector<unsigned char>& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.insert(out.end(), bytes, bytes + sizeof(T));
}

template <typename T>
T get(const std::vector<unsigned char>& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw Error(ErrorCode::kFormat, "VF2D file is truncated");
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  pos += sizeof(T);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const ScalarField& field, double time) {
  const Grid& g = field.grid();
  std::vector<unsigned char> buf;
  buf.reserve(28 + 8 * field.size());
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put<std::uint32_t>(buf, kSnapshotVersion);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.n));
  put<double>(buf, g.half_width);
  put<double>(buf, time);
  for (double v : field.values()) put<double>(buf, v);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::kIo, "read error on " + path.string());
  if (buf.size() < 4 || std::memcmp(buf.data(), kMagic, 4) != 0) {
    throw Error(ErrorCode::kFormat, path.string() + " is not a VF2D file");
  }
  std::size_t pos = 4;
  const auto version = get<std::uint32_t>(buf, pos);
  if (version != kSnapshotVersion) {
    throw Error(ErrorCode::kFormat, "unsupported VF2D version " + std::to_string(version));
  }
  const auto n = get<std::uint32_t>(buf, pos);
  const double half_width = get<double>(buf, pos);
  const double time = get<double>(buf, pos);
  Grid grid;
  try {
    grid = make_grid(static_cast<int>(n), half_width);
  } catch (const Error& e) {
    throw Error(ErrorCode::kFormat, std::string("VF2D header: ") + e.what());
  }
  const std::size_t count = grid.node_count();
  if (buf.size() - pos != 8 * count) {
    throw Error(ErrorCode::kFormat, "VF2D payload has " + std::to_string(buf.size() - pos) + " bytes, expected " +
                                        std::to_string(8 * count));
  }
  std::vector<double> values(count);
  for (auto& v : values) v = get<double>(buf, pos);
  return Snapshot{ScalarField(grid, std::move(values)), time};
}

}  // namespace vortexflow
