#include <benchmark/benchmark.h>

#include <initializer_list>

#include "hamosc/criteria.hpp"
#include "hamosc/quadrature.hpp"

using namespace hamosc;

namespace {

TimeMatrix real_matrix(const char* name, std::initializer_list<const char*> entries) {
  std::vector<ComplexExpr> e;
  for (const char* x : entries) e.push_back({parse_expr(x), ScalarExpr::constant(0.0)});
  return TimeMatrix(name, 2, std::move(e));
}

// p = 2 + sin t with B = diag(1/p, 0): B is singular everywhere.
SystemSpec block_system() {
  SystemSpec s;
  s.n = 2;
  s.A = real_matrix("A", {"-0.5*cos(t)/(2 + sin(t))", "1", "0", "0.1*sin(t) - 0.5*cos(t)/(2 + sin(t))"});
  s.B = real_matrix("B", {"1/(2 + sin(t))", "0", "0", "0"});
  s.C = real_matrix("C", {"-(2 + sin(t))", "0", "0", "-(2 + sin(t))"});
  s.mu = ScalarExpr::constant(0.0);
  s.p = parse_expr("2 + sin(t)");
  return s;
}

SystemSpec skew_rotation() {
  SystemSpec s;
  s.n = 2;
  CMatrix a(2, 2);
  a << 0, 1, -1, 0;
  s.A = TimeMatrix::constant("A", a);
  s.B = TimeMatrix::constant("B", CMatrix::Identity(2, 2));
  s.C = TimeMatrix::constant("C", -CMatrix::Identity(2, 2));
  s.mu = ScalarExpr::constant(0.0);
  return s;
}

}  // namespace

static void BM_EvalJ(benchmark::State& state) {
  const auto spec = skew_rotation();
  const auto grid = quad::uniform_grid(0.0, 200.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(criteria::eval_J(spec, grid).total().back());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvalJ)->Arg(1024)->Arg(4096);

static void BM_EvalJ2Singular(benchmark::State& state) {
  const auto spec = block_system();
  const auto grid = quad::uniform_grid(0.0, 200.0, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(criteria::eval_J2(spec, grid).total().back());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_EvalJ2Singular)->Arg(1024)->Arg(4096);

static void BM_AllCriteria(benchmark::State& state) {
  const auto spec = block_system();
  for (auto _ : state) {
    for (auto th : criteria::kAllTheorems) benchmark::DoNotOptimize(criteria::evaluate(th, spec).verdict);
  }
}
BENCHMARK(BM_AllCriteria)->Unit(benchmark::kMillisecond);
