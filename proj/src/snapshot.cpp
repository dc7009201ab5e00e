#include "hallmhd/snapshot.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "hallmhd/errors.hpp"

namespace hallmhd {

namespace {

constexpr char kMagic[4] = {'H', 'M', 'H', 'D'};
constexpr std::size_t kHeaderBytes = 4 + 4 * 4 + 8;

void put_u32(std::vector<unsigned char>& buf, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>(x >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& buf, double x) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<unsigned char>(bits >> (8 * i)));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t x = 0;
  for (int i = 0; i < 4; ++i) x |= std::uint32_t(p[i]) << (8 * i);
  return x;
}

double get_f64(const unsigned char* p) {
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i) x |= std::uint64_t(p[i]) << (8 * i);
  return std::bit_cast<double>(x);
}

std::uint32_t crc_of(const unsigned char* p, std::size_t n) {
  uLong c = crc32(0L, Z_NULL, 0);
  while (n > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    c = crc32(c, p, chunk);
    p += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(c);
}

std::vector<unsigned char> slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot open snapshot " + path);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

SnapshotHeader parse_header(const std::vector<unsigned char>& buf, const std::string& path) {
  if (buf.size() < kHeaderBytes + 4) throw FormatError(path + ": truncated snapshot");
  if (std::memcmp(buf.data(), kMagic, 4) != 0) throw FormatError(path + ": not a snapshot (bad magic)");
  SnapshotHeader h;
  h.version = get_u32(buf.data() + 4);
  h.dimension = get_u32(buf.data() + 8);
  h.n = get_u32(buf.data() + 12);
  h.components = get_u32(buf.data() + 16);
  h.t = get_f64(buf.data() + 20);
  h.crc = get_u32(buf.data() + buf.size() - 4);
  h.crc_ok = crc_of(buf.data(), buf.size() - 4) == h.crc;
  return h;
}

}  // namespace

void write_snapshot(const std::string& path, const State& s) {
  const auto& g = s.grid();
  const std::uint32_t comps = s.v ? 9 : 6;
  std::vector<unsigned char> buf;
  buf.reserve(kHeaderBytes + comps * g.spec_size() * 16 + 4);
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put_u32(buf, kSnapshotVersion);
  put_u32(buf, std::uint32_t(g.dim()));
  put_u32(buf, std::uint32_t(g.n()));
  put_u32(buf, comps);
  put_f64(buf, s.t);
  auto put_field = [&](const SpectralVector& f) {
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < g.spec_size(); ++i) {
        put_f64(buf, f[c][i].real());
        put_f64(buf, f[c][i].imag());
      }
  };
  put_field(s.u);
  put_field(s.b);
  if (s.v) put_field(*s.v);
  put_u32(buf, crc_of(buf.data(), buf.size()));

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw FormatError("cannot write snapshot " + path);
  f.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
  if (!f) throw FormatError("short write on snapshot " + path);
}

SnapshotHeader read_snapshot_header(const std::string& path) { return parse_header(slurp(path), path); }

State read_snapshot(const std::string& path) {
  const auto buf = slurp(path);
  const auto h = parse_header(buf, path);
  if (h.version != kSnapshotVersion) throw FormatError(path + ": unsupported snapshot version");
  if (h.dimension != 2 && h.dimension != 3) throw FormatError(path + ": bad dimension");
  if (h.components != 6 && h.components != 9) throw FormatError(path + ": bad component count");
  if (h.n < 8 || h.n % 2 != 0 || h.n > 4096) throw FormatError(path + ": bad resolution");
  const auto g = Grid::make(int(h.dimension), int(h.n));
  const std::size_t expect = kHeaderBytes + std::size_t(h.components) * g->spec_size() * 16 + 4;
  if (buf.size() != expect) throw FormatError(path + ": size does not match header");
  if (!h.crc_ok) throw FormatError(path + ": checksum mismatch");

  const unsigned char* p = buf.data() + kHeaderBytes;
  auto get_field = [&] {
    SpectralVector f(g);
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < g->spec_size(); ++i, p += 16) f[c][i] = Complex(get_f64(p), get_f64(p + 8));
    return f;
  };
  auto u = get_field();
  auto b = get_field();
  std::optional<SpectralVector> v;
  if (h.components == 9) v = get_field();
  return State(std::move(u), std::move(b), std::move(v), h.t);
}

State read_snapshot(const std::string& path, const Grid& grid) {
  const auto h = read_snapshot_header(path);
  if (int(h.dimension) != grid.dim() || int(h.n) != grid.n()) {
    throw FormatError(path + ": snapshot is dimension " + std::to_string(h.dimension) + ", n = " +
                      std::to_string(h.n) + "; expected dimension " + std::to_string(grid.dim()) +
                      ", n = " + std::to_string(grid.n()));
  }
  return read_snapshot(path);
}

}  // namespace hallmhd
