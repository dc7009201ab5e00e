#pragma once

#include <cstdint>
#include <string>

#include "hallmhd/mhd3d.hpp"

namespace hallmhd {

/// Layout, all little endian:
///   "HMHD" | u32 version | u32 dimension | u32 n | u32 components | f64 t
///   | components x spec_size x (f64 re, f64 im) | u32 crc32 of all preceding bytes
/// Coefficients follow the grid's half-spectrum storage order. Components are
/// u1..u3, B1..B3 and, when present, v1..v3. Dimension 2 marks a 2.5D state.
struct SnapshotHeader {
  std::uint32_t version = 1;
  std::uint32_t dimension = 3;
  std::uint32_t n = 0;
  std::uint32_t components = 6;
  double t = 0.0;
  std::uint32_t crc = 0;
  bool crc_ok = false;
};

constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const State& s);
/// FormatError on a bad magic, version, size or checksum.
State read_snapshot(const std::string& path);
/// Rejects snapshots whose dimension or resolution differ from `grid`.
State read_snapshot(const std::string& path, const Grid& grid);
/// Header plus checksum verdict; FormatError only if the header is unreadable.
SnapshotHeader read_snapshot_header(const std::string& path);

}  // namespace hallmhd
