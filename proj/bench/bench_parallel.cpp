#include <benchmark/benchmark.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <vector>

#include "maslov/band.hpp"
#include "maslov/parallel.hpp"
#include "maslov/verify1d.hpp"

namespace {

using maslov::Mat;

std::vector<Mat> random_hermitian_batch(int count, int dim) {
  std::mt19937_64 rng(20261016);
  std::normal_distribution<double> normal;
  std::vector<Mat> out;
  for (int i = 0; i < count; ++i) {
    Mat a(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) a(r, c) = {normal(rng), normal(rng)};
    out.push_back(a + a.adjoint());
  }
  return out;
}

/// Lowest eigenvalue of each matrix in a batch; arg 0 selects the OpenMP kernel.
void BM_HermitianBatch(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const auto batch = random_hermitian_batch(64, static_cast<int>(state.range(1)));
  for (auto _ : state) {
    auto lowest = maslov::parallel::map(
        batch.size(),
        [&](std::size_t i) {
          const Eigen::SelfAdjointEigenSolver<Mat> eig(batch[i], Eigen::EigenvaluesOnly);
          return eig.eigenvalues()(0);
        },
        parallel);
    benchmark::DoNotOptimize(lowest);
  }
  state.SetLabel(parallel ? "omp" : "serial");
}
BENCHMARK(BM_HermitianBatch)->ArgsProduct({{0, 1}, {48, 96}})->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_MorseVsT(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  const double v = -2.0 * M_PI * M_PI;
  const maslov::ScaledFamily family(maslov::LatticeCell::unit_interval(0.5),
                                    maslov::FourierPotential::constant(1, Mat::Constant(1, 1, v)));
  const auto trunc = maslov::FourierTruncation::create(1, 1, 16);
  std::vector<double> grid;
  for (int i = 0; i < 200; ++i) grid.push_back(0.05 + 0.95 * i / 199.0);
  maslov::BandOptions opts;
  opts.parallel = parallel;
  for (auto _ : state) benchmark::DoNotOptimize(maslov::morse_vs_t(family, grid, trunc, opts));
  state.SetLabel(parallel ? "omp" : "serial");
}
BENCHMARK(BM_MorseVsT)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_PeriodicIdentity(benchmark::State& state) {
  const bool parallel = state.range(0) != 0;
  maslov::Verify1DConfig cfg;
  cfg.maslov.parallel = parallel;
  cfg.check_methods = false;
  for (auto _ : state)
    benchmark::DoNotOptimize(maslov::verify_identity_rr15(maslov::Potential1D::scalar(-5.0), 0.0, M_PI, cfg));
  state.SetLabel(parallel ? "omp" : "serial");
}
BENCHMARK(BM_PeriodicIdentity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime()->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
