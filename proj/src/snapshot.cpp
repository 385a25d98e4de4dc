#include "nslab/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "nslab/errors.hpp"

namespace nslab {
namespace {

constexpr char kMagic[8] = {'N', 'S', 'L', 'A', 'B', 'F', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "snapshot IO assumes little-endian hosts");

template <typename T>
void put(std::ofstream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& is) {
  T value{};
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw IoError("snapshot: truncated header");
  return value;
}

}  // namespace

void write_snapshot(const std::string& path, double time, const std::vector<ScalarField>& components) {
  if (components.empty()) throw ArgumentError("write_snapshot: no components");
  const Grid& g = components.front().grid();
  for (const auto& c : components) require_same_grid(g, c.grid(), "write_snapshot");
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("write_snapshot: cannot open '" + path + "'");
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(components.size()));
  put<double>(os, time);
  for (const auto& c : components) {
    const auto v = c.values();
    os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
  }
  if (!os) throw IoError("write_snapshot: write failed for '" + path + "'");
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("read_snapshot: cannot open '" + path + "'");
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw IoError("read_snapshot: bad magic in '" + path + "'");
  if (get<std::uint32_t>(is) != kVersion) throw IoError("read_snapshot: unsupported version");
  const auto dim = get<std::uint32_t>(is);
  const auto n = get<std::uint32_t>(is);
  const auto count = get<std::uint32_t>(is);
  Snapshot snap;
  snap.grid = Grid(static_cast<int>(dim), static_cast<int>(n));
  snap.time = get<double>(is);
  for (std::uint32_t c = 0; c < count; ++c) {
    std::vector<double> values(snap.grid.size());
    is.read(reinterpret_cast<char*>(values.data()),
            static_cast<std::streamsize>(values.size() * sizeof(double)));
    if (!is) throw IoError("read_snapshot: truncated samples in '" + path + "'");
    ScalarField f(snap.grid, std::move(values));
    if (!f.all_finite()) throw NumericalError("read_snapshot: non-finite sample in '" + path + "'");
    snap.components.push_back(std::move(f));
  }
  return snap;
}

void write_snapshot_csv(const std::string& path, const std::vector<ScalarField>& components) {
  if (components.empty()) throw ArgumentError("write_snapshot_csv: no components");
  const Grid& g = components.front().grid();
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (fp == nullptr) throw IoError("write_snapshot_csv: cannot open '" + path + "'");
  for (int a = 0; a < g.dim(); ++a) std::fprintf(fp, "%sx%d", a ? "," : "", a);
  for (std::size_t c = 0; c < components.size(); ++c) std::fprintf(fp, ",c%zu", c);
  std::fprintf(fp, "\n");
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point x = g.coordinate(i);
    for (int a = 0; a < g.dim(); ++a) std::fprintf(fp, "%s%.17g", a ? "," : "", x[static_cast<std::size_t>(a)]);
    for (const auto& c : components) std::fprintf(fp, ",%.17g", c[i]);
    std::fprintf(fp, "\n");
  }
  std::fclose(fp);
}

}  // namespace nslab
