#include <omp.h>

#include <cmath>
#include <vector>

#include "kernels_common.hpp"

namespace normsol {

namespace kernels_omp {

using detail::kBlock;
using detail::Strides;

namespace {
std::size_t n_blocks(std::size_t n) { return (n + kBlock - 1) / kBlock; }
}  // namespace

void neg_laplacian(const Lattice& L, int order, const double* u, double* out) {
  const Strides st(L);
  const double ih2 = 1.0 / (L.h * L.h);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(L.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    out[i] = L.free[i] ? detail::neg_lap_at(st, order, u, static_cast<std::size_t>(i), ih2) : 0.0;
}

double dot(const Lattice& L, const double* a, const double* b) {
  const std::size_t n = L.size(), nb = n_blocks(n);
  std::vector<double> part(nb, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b0 = 0; b0 < static_cast<std::ptrdiff_t>(nb); ++b0) {
    const std::size_t i0 = b0 * kBlock, i1 = std::min(n, i0 + kBlock);
    double s = 0;
    for (std::size_t i = i0; i < i1; ++i) s += a[i] * b[i];
    part[b0] = s;
  }
  double s = 0;
  for (double v : part) s += v;
  return s;
}

EnergySums energy_sums(const Lattice& L, int order, const double* u, const double* V, double p) {
  const Strides st(L);
  const double ih2 = 1.0 / (L.h * L.h);
  const std::size_t n = L.size(), nb = n_blocks(n);
  std::vector<EnergySums> part(nb);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b0 = 0; b0 < static_cast<std::ptrdiff_t>(nb); ++b0) {
    const std::size_t i0 = b0 * kBlock, i1 = std::min(n, i0 + kBlock);
    EnergySums e;
    for (std::size_t i = i0; i < i1; ++i) {
      if (!L.free[i]) continue;
      const double ui = u[i], a = std::abs(ui);
      e.kinetic += ui * detail::neg_lap_at(st, order, u, i, ih2);
      if (V) e.potential += V[i] * ui * ui;
      e.power += pow_abs(a, p);
      e.mass += ui * ui;
    }
    part[b0] = e;
  }
  EnergySums e;
  for (const auto& q : part) {
    e.kinetic += q.kinetic;
    e.potential += q.potential;
    e.power += q.power;
    e.mass += q.mass;
  }
  return e;
}

void el_residual(const Lattice& L, int order, const double* u, const double* V, double lambda, double p,
                 double* out) {
  const Strides st(L);
  const double ih2 = 1.0 / (L.h * L.h);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(L.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (!L.free[i]) {
      out[i] = 0;
      continue;
    }
    const double ui = u[i];
    out[i] = detail::neg_lap_at(st, order, u, static_cast<std::size_t>(i), ih2) +
             ((V ? V[i] : 0.0) + lambda) * ui - pow_abs(std::abs(ui), p - 2.0) * ui;
  }
}

void ball_average(const Lattice& L, const BallStencil& B, const double* in, double* out) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(L.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = detail::ball_at(L, B, in, static_cast<std::size_t>(i));
}

}  // namespace kernels_omp

const KernelSet& kernels(Backend b) {
  static const KernelSet serial{kernels_serial::neg_laplacian, kernels_serial::dot, kernels_serial::energy_sums,
                                kernels_serial::el_residual, kernels_serial::ball_average};
  static const KernelSet parallel{kernels_omp::neg_laplacian, kernels_omp::dot, kernels_omp::energy_sums,
                                  kernels_omp::el_residual, kernels_omp::ball_average};
  return b == Backend::serial ? serial : parallel;
}

}  // namespace normsol
