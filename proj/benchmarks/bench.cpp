#include <benchmark/benchmark.h>

#include "dioph/analysis.hpp"
#include "dioph/contfrac.hpp"
#include "dioph/farey.hpp"
#include "dioph/partition.hpp"

using namespace dioph;

static void BM_FareySet(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(farey_set(static_cast<unsigned>(state.range(0))));
}
BENCHMARK(BM_FareySet)->Arg(10)->Arg(15);

static void BM_DiophantineDfs(benchmark::State& state) {
  const RealScalar phi = RealScalar::surd(1, 2, 5);
  EngineOptions opts;
  opts.threads = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(z_diophantine(phi, static_cast<unsigned>(state.range(0)), RealScalar::integer(3), false, opts));
  }
}
BENCHMARK(BM_DiophantineDfs)->Args({14, 1})->Args({18, 1})->Args({18, 8})->Unit(benchmark::kMillisecond);

static void BM_DiophantineSeries(benchmark::State& state) {
  const RealScalar r2 = RealScalar::surd(0, 1, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(z_diophantine_series(r2, static_cast<unsigned>(state.range(0)), RealScalar::integer(3)));
  }
}
BENCHMARK(BM_DiophantineSeries)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_ExactKnauf(benchmark::State& state) {
  for (auto _ : state) {
    PartitionSpec spec;
    spec.N = static_cast<unsigned>(state.range(0));
    spec.beta = RealScalar::integer(4);
    spec.prefix = IntMat2::A0();
    benchmark::DoNotOptimize(z_exact(spec));
  }
}
BENCHMARK(BM_ExactKnauf)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_ConvergentEstimate(benchmark::State& state) {
  const auto cf = cf_e_minus_1();
  const Scale scale = Scale::sqrtN_logN();
  for (auto _ : state) benchmark::DoNotOptimize(convergent_limit_estimate(cf, scale, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_ConvergentEstimate)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_PiQuotients(benchmark::State& state) {
  const RealScalar x = RealScalar::literal("3.14159265358979323846264338327950288419716939937510", 160);
  for (auto _ : state) benchmark::DoNotOptimize(cf_from_real(x, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_PiQuotients)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_TotientSum(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(totient_sum(RealScalar::rational(mpq_class(5, 2)), static_cast<std::uint64_t>(state.range(0))));
  }
}
BENCHMARK(BM_TotientSum)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_Diagnostic(benchmark::State& state) {
  const Construction c = construct_thm43();
  for (auto _ : state) benchmark::DoNotOptimize(construction_diagnostic(c, RealScalar::integer(3)));
}
BENCHMARK(BM_Diagnostic)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
