#pragma once
#include <cstddef>

#include "normsol/kernels.hpp"

namespace normsol::detail {

struct Strides {
  std::size_t s[3];
  int dim;
  explicit Strides(const Lattice& L) : s{L.stride(0), L.stride(1), L.stride(2)}, dim(L.dim) {}
};

inline double neg_lap_at(const Strides& st, int order, const double* u, std::size_t i, double ih2) {
  double acc = 0;
  if (order == 2) {
    for (int a = 0; a < st.dim; ++a) {
      const std::size_t s = st.s[a];
      acc += 2.0 * u[i] - u[i - s] - u[i + s];
    }
  } else {
    for (int a = 0; a < st.dim; ++a) {
      const std::size_t s = st.s[a];
      acc += (30.0 * u[i] - 16.0 * (u[i - s] + u[i + s]) + (u[i - 2 * s] + u[i + 2 * s])) * (1.0 / 12.0);
    }
  }
  return acc * ih2;
}

inline double ball_at(const Lattice& L, const BallStencil& B, const double* in, std::size_t idx) {
  const auto ijk = L.unravel(idx);
  double acc = 0;
  for (std::size_t k = 0; k < B.offsets.size(); ++k) {
    const auto& o = B.offsets[k];
    const int i = ijk[0] + o[0], j = ijk[1] + o[1], l = ijk[2] + o[2];
    if (i < 0 || i >= L.n[0] || j < 0 || j >= L.n[1] || l < 0 || l >= L.n[2]) continue;
    const std::size_t jdx = (static_cast<std::size_t>(i) * L.n[1] + j) * L.n[2] + l;
    acc += B.weights[k] * in[jdx];
  }
  return acc;
}

constexpr std::size_t kBlock = 4096;

}  // namespace normsol::detail
