#include "nilsoliton/certification.hpp"
#include "nilsoliton/constructions.hpp"
#include "nilsoliton/flow.hpp"
#include "nilsoliton/indecomposability.hpp"
#include "nilsoliton/moment.hpp"

#include <benchmark/benchmark.h>

using namespace nilsoliton;

static void BM_Moment(benchmark::State& st) {
  const auto c = random_tensor(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(moment(c));
}
BENCHMARK(BM_Moment)->Args({2, 5})->Args({4, 8})->Args({8, 16});

static void BM_MomentOracle(benchmark::State& st) {
  const auto c = random_tensor(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(moment_oracle(c));
}
BENCHMARK(BM_MomentOracle)->Args({2, 5})->Args({4, 8});

static void BM_DistinguishedReport(benchmark::State& st) {
  const auto c = build_family(FamilySpec::non_einstein(3, 4, 2, {1.5}));
  for (auto _ : st) benchmark::DoNotOptimize(distinguished_report(c));
}
BENCHMARK(BM_DistinguishedReport);

static void BM_FlowGeneric(benchmark::State& st) {
  const auto c = random_tensor(2, 5, 17);
  for (auto _ : st) benchmark::DoNotOptimize(flow_to_distinguished(c));
}
BENCHMARK(BM_FlowGeneric)->Unit(benchmark::kMillisecond);

static void BM_HDetection(benchmark::State& st) {
  const auto w = WPoint::ones(FamilySpec::non_einstein(6, 4, 2, {1.3}));
  for (auto _ : st) benchmark::DoNotOptimize(h_detection_check(w));
}
BENCHMARK(BM_HDetection);

static void BM_Certificate(benchmark::State& st) {
  CertifyOptions o;
  o.run_spread = st.range(0) != 0;
  const auto spec = FamilySpec::non_einstein(4, 6, 2, {0.8}, 3);
  for (auto _ : st) benchmark::DoNotOptimize(non_einstein_certificate(spec, o));
}
BENCHMARK(BM_Certificate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Pencil(benchmark::State& st) {
  const auto c = b_tuple(3);
  for (auto _ : st) benchmark::DoNotOptimize(pencil_nonsingular(c));
}
BENCHMARK(BM_Pencil)->Unit(benchmark::kMillisecond);

static void BM_DecompositionSearch(benchmark::State& st) {
  const auto c = build_family(FamilySpec::non_einstein(2, 2, 1));
  for (auto _ : st) benchmark::DoNotOptimize(decomposition_search(c));
}
BENCHMARK(BM_DecompositionSearch)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
