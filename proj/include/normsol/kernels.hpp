#pragma once
#include <cmath>
#include <cstddef>

#include "normsol/lattice.hpp"

namespace normsol {

enum class Backend { serial, parallel };

struct EnergySums {
  double kinetic = 0;    // u . (-Lap u)
  double potential = 0;  // sum V u^2
  double power = 0;      // sum |u|^p
  double mass = 0;       // sum u^2
};

// Grid sweeps. The serial set is the plain-loop reference; the parallel set uses
// OpenMP with fixed-size blocked reductions, so its sums do not depend on the thread count.
struct KernelSet {
  void (*neg_laplacian)(const Lattice&, int order, const double* u, double* out);
  double (*dot)(const Lattice&, const double* a, const double* b);
  EnergySums (*energy_sums)(const Lattice&, int order, const double* u, const double* V, double p);
  // out = -Lap u + (V + lambda) u - |u|^{p-2} u on free nodes
  void (*el_residual)(const Lattice&, int order, const double* u, const double* V, double lambda, double p,
                      double* out);
  void (*ball_average)(const Lattice&, const BallStencil&, const double* in, double* out);
};

const KernelSet& kernels(Backend b);

namespace kernels_serial {
void neg_laplacian(const Lattice&, int order, const double* u, double* out);
double dot(const Lattice&, const double* a, const double* b);
EnergySums energy_sums(const Lattice&, int order, const double* u, const double* V, double p);
void el_residual(const Lattice&, int order, const double* u, const double* V, double lambda, double p, double* out);
void ball_average(const Lattice&, const BallStencil&, const double* in, double* out);
}  // namespace kernels_serial

namespace kernels_omp {
void neg_laplacian(const Lattice&, int order, const double* u, double* out);
double dot(const Lattice&, const double* a, const double* b);
EnergySums energy_sums(const Lattice&, int order, const double* u, const double* V, double p);
void el_residual(const Lattice&, int order, const double* u, const double* V, double lambda, double p, double* out);
void ball_average(const Lattice&, const BallStencil&, const double* in, double* out);
}  // namespace kernels_omp

// a >= 0
inline double pow_abs(double a, double p) {
  if (p == 1.0) return a;
  if (p == 2.0) return a * a;
  if (p == 3.0) return a * a * a;
  if (p == 4.0) return (a * a) * (a * a);
  return std::pow(a, p);
}

}  // namespace normsol
