#include <random>

#include <benchmark/benchmark.h>

#include "nkstab/homogeneous.hpp"
#include "nkstab/presets.hpp"
#include "nkstab/stability.hpp"
#include "nkstab/su3.hpp"
#include "nkstab/tensor.hpp"
#include "nkstab/verify.hpp"

using namespace nkstab;

static void BM_Wedge2x3(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const DenseTensor a = random_form(6, 2, rng);
  const DenseTensor b = random_form(6, 3, rng);
  for (auto _ : state) benchmark::DoNotOptimize(wedge(a, b));
}
BENCHMARK(BM_Wedge2x3);

static void BM_SigmaPlus(benchmark::State& state) {
  const SU3Structure s = standard_model();
  std::mt19937_64 rng(1);
  const DenseTensor h = random_s2_12(s, rng);
  const Matrix hm = h.to_matrix();
  for (auto _ : state) benchmark::DoNotOptimize(sigma_plus(s, endo_action(hm, s.omega_plus)));
}
BENCHMARK(BM_SigmaPlus);

static void BM_LoadAndNormalize(benchmark::State& state) {
  const SpaceDefinition def = preset_definition("su3_t2");
  for (auto _ : state) benchmark::DoNotOptimize(scale_to_einstein(HomogeneousSpace(def)));
}
BENCHMARK(BM_LoadAndNormalize)->Unit(benchmark::kMicrosecond);

static void BM_HarmonicThreeForms(benchmark::State& state) {
  const HomogeneousSpace sp = scale_to_einstein(HomogeneousSpace(preset_definition("s3xs3")));
  for (auto _ : state) benchmark::DoNotOptimize(harmonic_invariant_forms(sp, 3));
}
BENCHMARK(BM_HarmonicThreeForms)->Unit(benchmark::kMicrosecond);

static void BM_VerifyModel(benchmark::State& state) {
  ModelOptions o;
  o.samples = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_model(o));
}
BENCHMARK(BM_VerifyModel)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_VerifySpace(benchmark::State& state) {
  const char* names[] = {"s3xs3", "su3_t2", "cp3", "s6"};
  const SpaceDefinition def = preset_definition(names[state.range(0)]);
  state.SetLabel(def.name);
  for (auto _ : state) benchmark::DoNotOptimize(verify_space(def, SpaceOptions{}));
}
BENCHMARK(BM_VerifySpace)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
