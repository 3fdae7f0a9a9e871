#include "dchain/catalog.hpp"
#include "dchain/fqsym.hpp"
#include "dchain/linalg.hpp"
#include "dchain/words.hpp"

#include <benchmark/benchmark.h>

#include <numeric>

using namespace dchain;

namespace {

void refined_coproduct_words(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  Word w(n);
  std::iota(w.begin(), w.end(), 1u);
  const BasisElement x = make_word(AlgebraId::free_associative, w);
  WeakComposition d(std::vector<unsigned>(n, 1));
  for (auto _ : state) benchmark::DoNotOptimize(free_associative_algebra().refined_coproduct(x, d));
}
BENCHMARK(refined_coproduct_words)->DenseRange(4, 8, 2);

void todo_matrix(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_transition_matrix(todo_chain(OperatorSpec{}, n)));
}
BENCHMARK(todo_matrix)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

void tree_matrix(benchmark::State& state) {
  TreeChainConfig cfg;
  cfg.start = eight_person_company();
  cfg.model = state.range(0) ? TreeModel::binomial : TreeModel::single;
  for (auto _ : state) benchmark::DoNotOptimize(tree_chain_matrix(cfg));
}
BENCHMARK(tree_matrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void exact_rank(benchmark::State& state) {
  const unsigned n = static_cast<unsigned>(state.range(0));
  const DenseMatrix k = build_transition_matrix(todo_chain(OperatorSpec{}, n)).dense();
  for (auto _ : state) benchmark::DoNotOptimize(rank(k));
}
BENCHMARK(exact_rank)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
