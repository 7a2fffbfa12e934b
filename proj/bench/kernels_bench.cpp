// Serial reference vs OpenMP kernels on 2D and 3D boxes.
// Arg(0) = dimension, Arg(1) = nodes per axis.
#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "normsol/kernels.hpp"
#include "normsol/lattice.hpp"

using namespace normsol;

namespace {

struct Fixture {
  std::shared_ptr<Lattice> lat;
  std::vector<double> u, V, out;

  Fixture(int dim, int n) {
    const double h = 0.25;
    lat = Lattice::box(dim, 0.5 * (n - 1) * h, h, 2);
    u.resize(lat->size());
    V.resize(lat->size());
    out.resize(lat->size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      const auto x = lat->position(i);
      const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
      u[i] = lat->free[i] ? 1.0 / std::cosh(std::sqrt(r2)) : 0.0;
      V[i] = std::exp(-r2 / 4);
    }
  }
};

template <Backend B>
void BM_neg_laplacian(benchmark::State& st) {
  Fixture f(st.range(0), st.range(1));
  const auto& k = kernels(B);
  for (auto _ : st) {
    k.neg_laplacian(*f.lat, 4, f.u.data(), f.out.data());
    benchmark::DoNotOptimize(f.out.data());
  }
  st.SetItemsProcessed(st.iterations() * f.lat->size());
}

template <Backend B>
void BM_energy_sums(benchmark::State& st) {
  Fixture f(st.range(0), st.range(1));
  const auto& k = kernels(B);
  for (auto _ : st) benchmark::DoNotOptimize(k.energy_sums(*f.lat, 4, f.u.data(), f.V.data(), 3.0));
  st.SetItemsProcessed(st.iterations() * f.lat->size());
}

template <Backend B>
void BM_el_residual(benchmark::State& st) {
  Fixture f(st.range(0), st.range(1));
  const auto& k = kernels(B);
  for (auto _ : st) {
    k.el_residual(*f.lat, 4, f.u.data(), f.V.data(), 0.5, 3.0, f.out.data());
    benchmark::DoNotOptimize(f.out.data());
  }
  st.SetItemsProcessed(st.iterations() * f.lat->size());
}

template <Backend B>
void BM_ball_average(benchmark::State& st) {
  Fixture f(st.range(0), st.range(1));
  const auto ball = BallStencil::build(*f.lat);
  const auto& k = kernels(B);
  for (auto _ : st) {
    k.ball_average(*f.lat, ball, f.u.data(), f.out.data());
    benchmark::DoNotOptimize(f.out.data());
  }
  st.SetItemsProcessed(st.iterations() * f.lat->size());
}

void sizes(benchmark::internal::Benchmark* b) { b->Args({2, 257})->Args({2, 1025})->Args({3, 65})->Args({3, 129}); }

}  // namespace

BENCHMARK(BM_neg_laplacian<Backend::serial>)->Apply(sizes)->UseRealTime();
BENCHMARK(BM_neg_laplacian<Backend::parallel>)->Apply(sizes)->UseRealTime();
BENCHMARK(BM_energy_sums<Backend::serial>)->Apply(sizes)->UseRealTime();
BENCHMARK(BM_energy_sums<Backend::parallel>)->Apply(sizes)->UseRealTime();
BENCHMARK(BM_el_residual<Backend::serial>)->Apply(sizes)->UseRealTime();
BENCHMARK(BM_el_residual<Backend::parallel>)->Apply(sizes)->UseRealTime();
BENCHMARK(BM_ball_average<Backend::serial>)->Args({2, 257})->Args({3, 65})->UseRealTime();
BENCHMARK(BM_ball_average<Backend::parallel>)->Args({2, 257})->Args({3, 65})->UseRealTime();

BENCHMARK_MAIN();
