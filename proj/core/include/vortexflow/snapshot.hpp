#pragma once

#include <cstdint>
#include <filesystem>

#include "vortexflow/grid.hpp"

namespace vortexflow {

/// Binary field file: "VF2D", u32 version (1), u32 n, f64 half_width,
/// f64 time, then n*n f64 values in row-major order, all little-endian.
struct Snapshot {
  ScalarField field;
  double time = 0.0;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// Throws kIo when the file cannot be written.
void write_snapshot(const std::filesystem::path& path, const ScalarField& field, double time);

/// Throws kIo when the file cannot be read and kFormat on a bad header or
/// truncated payload.
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace vortexflow
