#include <benchmark/benchmark.h>

#include "beamfold/continuation.hpp"
#include "beamfold/spectral.hpp"

using namespace beamfold;

namespace {

DiscreteProblem make_problem(int n) {
  return DiscreteProblem(catalog_lookup("inverse_square"), n);
}

void BM_assemble_residual(benchmark::State& state) {
  auto dp = make_problem(static_cast<int>(state.range(0)));
  auto U = linear_predictor(dp, 20.0);
  for (auto _ : state) {
    auto R = assemble_residual(dp, 20.0, U);
    benchmark::DoNotOptimize(R.data());
  }
  state.SetItemsProcessed(state.iterations() * dp.interior());
}

void BM_banded_factor_solve(benchmark::State& state) {
  auto dp = make_problem(static_cast<int>(state.range(0)));
  auto U = linear_predictor(dp, 20.0);
  auto J = assemble_jacobian(dp, 20.0, U);
  std::vector<double> rhs(dp.interior(), 1.0);
  for (auto _ : state) {
    BandLU lu(J);
    auto x = lu.solve(rhs);
    benchmark::DoNotOptimize(x.data());
  }
}

void BM_newton_solve(benchmark::State& state) {
  auto dp = make_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto sol = newton_solve(dp, 30.0, linear_predictor(dp, 30.0));
    benchmark::DoNotOptimize(sol.p);
  }
}

void BM_smallest_eigenvalue(benchmark::State& state) {
  auto dp = make_problem(static_cast<int>(state.range(0)));
  auto sol = newton_solve(dp, 30.0, linear_predictor(dp, 30.0));
  for (auto _ : state) {
    auto est = linearized_smallest_eigenvalue(dp, sol);
    benchmark::DoNotOptimize(est.value);
  }
}

void BM_trace_curve(benchmark::State& state) {
  auto dp = make_problem(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto curve = trace_curve(dp, {});
    benchmark::DoNotOptimize(curve.points.size());
  }
}

}  // namespace

BENCHMARK(BM_assemble_residual)->Arg(251)->Arg(501)->Arg(1001);
BENCHMARK(BM_banded_factor_solve)->Arg(251)->Arg(501)->Arg(1001);
BENCHMARK(BM_newton_solve)->Arg(251)->Arg(501);
BENCHMARK(BM_smallest_eigenvalue)->Arg(251)->Arg(501);
BENCHMARK(BM_trace_curve)->Arg(251)->Arg(501);

BENCHMARK_MAIN();
