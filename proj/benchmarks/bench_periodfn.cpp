#include <benchmark/benchmark.h>

#include "periodfn/criteria.hpp"
#include "periodfn/example.hpp"
#include "periodfn/period.hpp"

using namespace periodfn;

namespace {

const Potential& gs() {
  static const Potential p = example::gs_potential();
  return p;
}

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(parse(example::kGsExpression));
}
BENCHMARK(BM_Parse);

void BM_TaylorLift(benchmark::State& state) {
  const Expression e = example::gs_expression();
  const ParamBinding p = example::gs_params();
  for (auto _ : state) benchmark::DoNotOptimize(e.taylor_at_zero(p, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TaylorLift)->Arg(8)->Arg(24);

void BM_CoefficientIdentification(benchmark::State& state) {
  const PowerSeries& g = gs().series();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(extract_criterion_coefficients(g, n));
}
BENCHMARK(BM_CoefficientIdentification)->DenseRange(0, 4);

void BM_BuildPotential(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(example::gs_potential());
}
BENCHMARK(BM_BuildPotential)->Unit(benchmark::kMillisecond);

void BM_PeriodAt(benchmark::State& state) {
  const double c = gs().domain().c_bar * static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(period_at(gs(), c));
}
BENCHMARK(BM_PeriodAt)->Arg(1)->Arg(50)->Arg(95)->Unit(benchmark::kMicrosecond);

void BM_PeriodViaOde(benchmark::State& state) {
  const double c = 0.5 * gs().domain().c_bar;
  for (auto _ : state) benchmark::DoNotOptimize(period_via_ode(gs(), c));
}
BENCHMARK(BM_PeriodViaOde)->Unit(benchmark::kMicrosecond);

void BM_SignScan(benchmark::State& state) {
  const CriterionPolynomial poly = criterion_polynomial(gs(), 2);
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sign_scan(gs(), poly, grid));
}
BENCHMARK(BM_SignScan)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

void BM_Verdict(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(monotonicity_verdict(gs(), 2));
}
BENCHMARK(BM_Verdict)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
