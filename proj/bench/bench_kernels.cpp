// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "distweyl/quasideriv.hpp"
#include "distweyl/spectral.hpp"

using namespace distweyl;

namespace {

WeylProblem n4_problem() {
  Domain d = Domain::interval(1);
  std::vector<CoefficientFunction> s{CoefficientFunction::bump(Rational(1, 5), Rational(3, 5), 2, BumpProfile::Hat, d),
                                     CoefficientFunction::zero(d),
                                     CoefficientFunction::bump(Rational(1, 10), Rational(9, 10), -1, BumpProfile::Smooth, d)};
  MatrixFunction F = build_F(make_coefficient_set(validate_orders(4, {1, 0, 1}), s)).eval;
  Eigen::MatrixXcd L = Eigen::MatrixXcd::Identity(4, 4);
  L(2, 0) = 0.5;
  L(3, 1) = -0.25;
  BoundaryForm U({3, 2, 1, 0}, L);
  BoundaryForm V({0, 1, 2, 3}, Eigen::MatrixXcd::Identity(4, 4));
  return WeylProblem{F, U, V, 1.0, std::nullopt, Orientation::PhiEqualsCM};
}

std::vector<cdouble> grid(int count) {
  std::vector<cdouble> out;
  for (int i = 0; i < count; ++i) out.push_back(std::polar(2.0 + 3.0 * i, 0.4 + 2.2 * i / count));
  return out;
}

void BM_SweepSerial(benchmark::State& state) {
  WeylProblem p = n4_problem();
  std::vector<cdouble> g = grid(16);
  SolverOptions opts;
  opts.steps = 2000;
  for (auto _ : state) benchmark::DoNotOptimize(weyl_sweep_serial(p, g, opts));
}

void BM_SweepOpenMP(benchmark::State& state) {
  WeylProblem p = n4_problem();
  std::vector<cdouble> g = grid(16);
  SolverOptions opts;
  opts.steps = 2000;
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(weyl_sweep(p, g, opts, jobs));
}

void BM_RegularizationSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(regularization_suite_serial(6, 1, 20));
}

void BM_RegularizationOpenMP(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(regularization_suite(6, 1, 20));
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepOpenMP)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RegularizationSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RegularizationOpenMP)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
