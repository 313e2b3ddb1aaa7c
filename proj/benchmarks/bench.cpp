#include <benchmark/benchmark.h>

#include "relsite/corpus.hpp"
#include "relsite/fixtures.hpp"
#include "relsite/presheaf.hpp"
#include "relsite/relative.hpp"

namespace {

using namespace relsite;

void bm_all_topologies_arrow(benchmark::State& state) {
  CatPtr c = fixtures::c2();
  for (auto _ : state) benchmark::DoNotOptimize(all_topologies(c));
}
BENCHMARK(bm_all_topologies_arrow);

void bm_enumerate_categories(benchmark::State& state) {
  for (auto _ : state) {
    int n = 0;
    for_each_category(2, static_cast<int>(state.range(0)), [&](const CatPtr&) {
      ++n;
      return true;
    });
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(bm_enumerate_categories)->Arg(4)->Arg(5)->Arg(6);

void bm_cofinality_identity(benchmark::State& state) {
  RelativeProblem prob = fixtures::identity_problem();
  for (auto _ : state) benchmark::DoNotOptimize(check_cofinality(prob));
}
BENCHMARK(bm_cofinality_identity);

void bm_verdict_with_oracle(benchmark::State& state) {
  RelativeProblem prob = fixtures::pos_problem();
  for (auto _ : state) benchmark::DoNotOptimize(relative_verdict(prob, true));
}
BENCHMARK(bm_verdict_with_oracle);

void bm_sheafify_representable(benchmark::State& state) {
  CatPtr c = fixtures::c2();
  Topology j1 = fixtures::j_one();
  FinPresheaf ya = *representable(c, 0);
  for (auto _ : state) benchmark::DoNotOptimize(sheafify(ya, j1));
}
BENCHMARK(bm_sheafify_representable);

void bm_diagonal_density(benchmark::State& state) {
  RelativeProblem prob = fixtures::identity_problem();
  for (auto _ : state) benchmark::DoNotOptimize(check_diagonal_density(prob));
}
BENCHMARK(bm_diagonal_density);

}  // namespace

BENCHMARK_MAIN();
