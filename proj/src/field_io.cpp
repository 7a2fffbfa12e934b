#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "normsol/field_energy.hpp"

namespace normsol {

namespace {

constexpr char kMagic[8] = {'N', 'S', 'F', 'L', 'D', '1', 0, 0};

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v;
  if (!is.read(reinterpret_cast<char*>(&v), sizeof(T))) throw std::runtime_error("snapshot truncated");
  return v;
}

}  // namespace

void write_snapshot(std::ostream& os, const GridField& u) {
  const Lattice& L = *u.lat;
  os.write(kMagic, 8);
  put<std::int32_t>(os, L.dim);
  for (int a = 0; a < 3; ++a) put<std::int32_t>(os, L.n[a]);
  put<double>(os, L.h);
  for (int a = 0; a < 3; ++a) put<double>(os, L.lo[a]);
  std::vector<std::pair<std::uint8_t, std::uint64_t>> runs;
  for (auto f : L.free) {
    if (!runs.empty() && runs.back().first == f)
      ++runs.back().second;
    else
      runs.push_back({f, 1});
  }
  put<std::uint64_t>(os, runs.size());
  for (auto& r : runs) {
    put<std::uint8_t>(os, r.first);
    put<std::uint64_t>(os, r.second);
  }
  os.write(reinterpret_cast<const char*>(u.v.data()), static_cast<std::streamsize>(sizeof(double) * u.v.size()));
}

GridField read_snapshot(std::istream& is) {
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("not a field snapshot");
  auto L = std::make_shared<Lattice>();
  L->dim = get<std::int32_t>(is);
  for (int a = 0; a < 3; ++a) L->n[a] = get<std::int32_t>(is);
  L->h = get<double>(is);
  for (int a = 0; a < 3; ++a) L->lo[a] = get<double>(is);
  const auto nr = get<std::uint64_t>(is);
  for (std::uint64_t k = 0; k < nr; ++k) {
    const auto f = get<std::uint8_t>(is);
    const auto len = get<std::uint64_t>(is);
    L->free.insert(L->free.end(), len, f);
  }
  if (L->free.size() != L->size()) throw std::runtime_error("snapshot mask length mismatch");
  GridField u(L);
  if (!is.read(reinterpret_cast<char*>(u.v.data()), static_cast<std::streamsize>(sizeof(double) * u.v.size())))
    throw std::runtime_error("snapshot payload truncated");
  return u;
}

void write_csv_slice(std::ostream& os, const GridField& u, int axis) {
  const Lattice& L = *u.lat;
  std::array<int, 3> c{L.n[0] / 2, L.n[1] / 2, L.n[2] / 2};
  os.precision(12);
  os << "x,u\n";
  for (int i = 0; i < L.n[axis]; ++i) {
    c[axis] = i;
    const std::size_t idx = (static_cast<std::size_t>(c[0]) * L.n[1] + c[1]) * L.n[2] + c[2];
    os << L.coord(axis, i) << ',' << u.v[idx] << '\n';
  }
}

}  // namespace normsol
