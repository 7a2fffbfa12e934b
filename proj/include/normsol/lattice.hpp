#pragma once
#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace normsol {

// Node-centred box lattice. Row-major, axis 0 slowest; unused axes have n = 1.
struct Lattice {
  int dim = 1;
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> lo{0, 0, 0};
  double h = 1;
  std::vector<std::uint8_t> free;  // 0 = pinned to zero

  std::size_t size() const { return static_cast<std::size_t>(n[0]) * n[1] * n[2]; }
  std::size_t stride(int axis) const {
    return axis == 0 ? static_cast<std::size_t>(n[1]) * n[2] : axis == 1 ? static_cast<std::size_t>(n[2]) : 1;
  }
  double cell_volume() const;
  double coord(int axis, int i) const { return lo[axis] + i * h; }
  std::array<int, 3> unravel(std::size_t idx) const {
    const int k = static_cast<int>(idx % n[2]);
    const std::size_t r = idx / n[2];
    return {static_cast<int>(r / n[1]), static_cast<int>(r % n[1]), k};
  }
  std::array<double, 3> position(std::size_t idx) const {
    auto ijk = unravel(idx);
    std::array<double, 3> x{0, 0, 0};
    for (int a = 0; a < dim; ++a) x[a] = coord(a, ijk[a]);
    return x;
  }
  std::size_t free_count() const;
  double half_width(int axis) const { return 0.5 * (n[axis] - 1) * h; }

  // box [-B, B]^dim with the outer `layers` rings pinned
  static std::shared_ptr<Lattice> box(int dim, double half_width, double h, int layers = 2);
  // [a, b] in one dimension, both ends pinned
  static std::shared_ptr<Lattice> interval(double a, double b, double h, int layers = 2);
  void pin_ball(double radius, const std::array<double, 3>& centre = {0, 0, 0});
  void pin_half_space(int axis, double at);  // pins x_axis <= at
};

using LatticePtr = std::shared_ptr<const Lattice>;

struct GridField {
  LatticePtr lat;
  std::vector<double> v;

  GridField() = default;
  explicit GridField(LatticePtr l) : lat(std::move(l)), v(lat->size(), 0.0) {}
  GridField(LatticePtr l, std::vector<double> vals) : lat(std::move(l)), v(std::move(vals)) {}
  std::size_t size() const { return v.size(); }
  void apply_mask();
};

// cell-coverage weights of the unit ball, used for the local average mu(u)
struct BallStencil {
  std::vector<std::array<int, 3>> offsets;
  std::vector<double> weights;  // normalised to sum 1
  static BallStencil build(const Lattice& lat, double radius = 1.0, int sub = 16);
};

// reflection x_axis -> 2c - x_axis about the box centre
void reflect(const Lattice& lat, int axis, const double* in, double* out);

}  // namespace normsol
