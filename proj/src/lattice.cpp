#include "normsol/lattice.hpp"

#include <cmath>
#include <algorithm>
#include <stdexcept>

namespace normsol {

double Lattice::cell_volume() const { return std::pow(h, dim); }

std::size_t Lattice::free_count() const {
  return static_cast<std::size_t>(std::count(free.begin(), free.end(), std::uint8_t{1}));
}

std::shared_ptr<Lattice> Lattice::box(int dim, double half_width, double h, int layers) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("lattice dimension must be 1..3");
  if (!(h > 0) || !(half_width > 2 * layers * h)) throw std::invalid_argument("lattice too small for spacing");
  auto L = std::make_shared<Lattice>();
  L->dim = dim;
  L->h = h;
  const int m = static_cast<int>(std::lround(half_width / h));
  for (int a = 0; a < dim; ++a) {
    L->n[a] = 2 * m + 1;
    L->lo[a] = -m * h;
  }
  L->free.assign(L->size(), 1);
  for (std::size_t idx = 0; idx < L->size(); ++idx) {
    auto ijk = L->unravel(idx);
    for (int a = 0; a < dim; ++a)
      if (ijk[a] < layers || ijk[a] >= L->n[a] - layers) L->free[idx] = 0;
  }
  return L;
}

std::shared_ptr<Lattice> Lattice::interval(double a, double b, double h, int layers) {
  if (!(b > a) || !(h > 0)) throw std::invalid_argument("bad interval");
  auto L = std::make_shared<Lattice>();
  L->dim = 1;
  L->h = h;
  // node 0 at a, last node at b; the Dirichlet walls are the first/last pinned nodes
  const int m = static_cast<int>(std::lround((b - a) / h));
  L->n[0] = m + 1 + 2 * (layers - 1);
  L->lo[0] = a - (layers - 1) * h;
  L->free.assign(L->size(), 1);
  for (int i = 0; i < L->n[0]; ++i)
    if (i < layers || i >= L->n[0] - layers) L->free[i] = 0;
  return L;
}

void Lattice::pin_ball(double radius, const std::array<double, 3>& c) {
  for (std::size_t idx = 0; idx < size(); ++idx) {
    auto x = position(idx);
    double r2 = 0;
    for (int a = 0; a < dim; ++a) r2 += (x[a] - c[a]) * (x[a] - c[a]);
    if (r2 <= radius * radius) free[idx] = 0;
  }
}

void Lattice::pin_half_space(int axis, double at) {
  for (std::size_t idx = 0; idx < size(); ++idx)
    if (position(idx)[axis] <= at + 1e-12 * h) free[idx] = 0;
}

void GridField::apply_mask() {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!lat->free[i]) v[i] = 0;
}

BallStencil BallStencil::build(const Lattice& lat, double radius, int sub) {
  BallStencil st;
  const double h = lat.h;
  const int m = static_cast<int>(std::ceil(radius / h + 0.5));
  std::array<int, 3> lim{0, 0, 0};
  for (int a = 0; a < lat.dim; ++a) lim[a] = m;
  double total = 0;
  for (int i = -lim[0]; i <= lim[0]; ++i)
    for (int j = -lim[1]; j <= lim[1]; ++j)
      for (int k = -lim[2]; k <= lim[2]; ++k) {
        const std::array<int, 3> o{i, j, k};
        std::array<int, 3> ns{1, 1, 1};
        for (int a = 0; a < lat.dim; ++a) ns[a] = sub;
        int inside = 0, count = 0;
        for (int a0 = 0; a0 < ns[0]; ++a0)
          for (int a1 = 0; a1 < ns[1]; ++a1)
            for (int a2 = 0; a2 < ns[2]; ++a2) {
              const std::array<int, 3> s{a0, a1, a2};
              double r2 = 0;
              for (int a = 0; a < lat.dim; ++a) {
                const double x = (o[a] - 0.5 + (s[a] + 0.5) / sub) * h;
                r2 += x * x;
              }
              ++count;
              if (r2 <= radius * radius) ++inside;
            }
        if (inside == 0) continue;
        const double w = static_cast<double>(inside) / count;
        st.offsets.push_back(o);
        st.weights.push_back(w);
        total += w;
      }
  for (double& w : st.weights) w /= total;
  return st;
}

void reflect(const Lattice& lat, int axis, const double* in, double* out) {
  const std::size_t N = lat.size();
  for (std::size_t idx = 0; idx < N; ++idx) {
    auto ijk = lat.unravel(idx);
    ijk[axis] = lat.n[axis] - 1 - ijk[axis];
    const std::size_t j = (static_cast<std::size_t>(ijk[0]) * lat.n[1] + ijk[1]) * lat.n[2] + ijk[2];
    out[idx] = in[j];
  }
}

}  // namespace normsol
