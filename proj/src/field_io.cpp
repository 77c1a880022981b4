#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>

#include "qbl/error.hpp"
#include "qbl/grid.hpp"

namespace qbl {

namespace {

template <typename T>
T to_le(T v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
  std::memcpy(&v, b, sizeof(T));
  return v;
}

template <typename T>
void put(std::ofstream& out, T v) {
  v = to_le(v);
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& path) {
  T v;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) throw DataError(path + ": truncated snapshot");
  return to_le(v);
}

}  // namespace

void write_snapshot(const std::string& path, const DistributionField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write snapshot '" + path + "'");
  out.write("SKF1", 4);
  put<std::int64_t>(out, f.grid.n);
  put<double>(out, f.grid.L);
  for (double v : f.values) put<double>(out, v);
  if (!out) throw DataError("write failed for '" + path + "'");
}

DistributionField read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open snapshot '" + path + "'");
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "SKF1", 4) != 0)
    throw DataError(path + ": bad magic, expected SKF1");
  auto n = get<std::int64_t>(in, path);
  double L = get<double>(in, path);
  if (n < 8 || n > 4096 || n % 2 != 0 || !(L > 0)) throw DataError(path + ": invalid grid header");
  DistributionField f(VelocityGrid(static_cast<int>(n), L));
  for (std::size_t i = 0; i < f.size(); ++i) {
    double v = get<double>(in, path);
    if (!std::isfinite(v)) throw DataError(path + ": non-finite value at node " + std::to_string(i));
    f[i] = v;
  }
  return f;
}

void write_field_csv(const std::string& path, const DistributionField& f) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << "v1,v2,v3,f\n" << std::setprecision(17);
  for (std::size_t i = 0; i < f.size(); ++i) {
    Vec3 v = f.grid.node(i);
    out << v.x << ',' << v.y << ',' << v.z << ',' << f[i] << '\n';
  }
}

}  // namespace qbl
