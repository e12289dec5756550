#include <benchmark/benchmark.h>

#include "hamosc/integrate.hpp"
#include "hamosc/matlin.hpp"

using namespace hamosc;

namespace {

SystemSpec rotation(Eigen::Index n) {
  SystemSpec s;
  s.n = n;
  CMatrix a = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; i += 2) {
    a(i, i + 1) = 1.0;
    a(i + 1, i) = -1.0;
  }
  s.A = TimeMatrix::constant("A", a);
  s.B = TimeMatrix::constant("B", CMatrix::Identity(n, n));
  s.C = TimeMatrix::constant("C", -CMatrix::Identity(n, n));
  s.mu = ScalarExpr::constant(0.0);
  return s;
}

}  // namespace

static void BM_IntegrateSystem(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto spec = rotation(n);
  for (auto _ : state) {
    auto traj = integrate_system(spec, CMatrix::Identity(n, n), CMatrix::Zero(n, n), 50.0);
    benchmark::DoNotOptimize(traj.times.back());
  }
}
BENCHMARK(BM_IntegrateSystem)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_ScanZeros(benchmark::State& state) {
  const auto spec = rotation(2);
  const auto traj = integrate_system(spec, CMatrix::Identity(2, 2), CMatrix::Zero(2, 2), 200.0);
  for (auto _ : state) benchmark::DoNotOptimize(scan_det_zeros(traj).zeros.size());
}
BENCHMARK(BM_ScanZeros)->Unit(benchmark::kMillisecond);

static void BM_EigHermitian(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  CMatrix g = CMatrix::Random(n, n);
  const CMatrix h = g * g.adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(matlin::eig_hermitian(h).min());
}
BENCHMARK(BM_EigHermitian)->Arg(2)->Arg(8)->Arg(32);
