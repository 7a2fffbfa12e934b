#include <cmath>

#include "kernels_common.hpp"

namespace normsol::kernels_serial {

using detail::Strides;

void neg_laplacian(const Lattice& L, int order, const double* u, double* out) {
  const Strides st(L);
  const double ih2 = 1.0 / (L.h * L.h);
  for (std::size_t i = 0; i < L.size(); ++i)
    out[i] = L.free[i] ? detail::neg_lap_at(st, order, u, i, ih2) : 0.0;
}

double dot(const Lattice& L, const double* a, const double* b) {
  double s = 0;
  for (std::size_t i = 0; i < L.size(); ++i) s += a[i] * b[i];
  return s;
}

EnergySums energy_sums(const Lattice& L, int order, const double* u, const double* V, double p) {
  const Strides st(L);
  const double ih2 = 1.0 / (L.h * L.h);
  EnergySums e;
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (!L.free[i]) continue;
    const double ui = u[i], a = std::abs(ui);
    e.kinetic += ui * detail::neg_lap_at(st, order, u, i, ih2);
    if (V) e.potential += V[i] * ui * ui;
    e.power += pow_abs(a, p);
    e.mass += ui * ui;
  }
  return e;
}

void el_residual(const Lattice& L, int order, const double* u, const double* V, double lambda, double p,
                 double* out) {
  const Strides st(L);
  const double ih2 = 1.0 / (L.h * L.h);
  for (std::size_t i = 0; i < L.size(); ++i) {
    if (!L.free[i]) {
      out[i] = 0;
      continue;
    }
    const double ui = u[i];
    out[i] = detail::neg_lap_at(st, order, u, i, ih2) + ((V ? V[i] : 0.0) + lambda) * ui -
             pow_abs(std::abs(ui), p - 2.0) * ui;
  }
}

void ball_average(const Lattice& L, const BallStencil& B, const double* in, double* out) {
  for (std::size_t i = 0; i < L.size(); ++i) out[i] = detail::ball_at(L, B, in, i);
}

}  // namespace normsol::kernels_serial
