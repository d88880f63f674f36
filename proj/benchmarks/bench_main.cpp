#include "mcduff/blockop.hpp"
#include "mcduff/jsstab.hpp"
#include "mcduff/repalg.hpp"
#include "mcduff/tensortrace.hpp"

#include <benchmark/benchmark.h>

#include <set>

using namespace mcduff;

namespace {

void BM_CompareClose(benchmark::State& state) {
  // 2^(-1/k) against a rational neighbour: sign needs refinement
  const auto k = state.range(0);
  const auto a = ExactScalar::dyadic(make_rational(-1, k));
  const auto b = ExactScalar(make_rational(k - 1, k)) + ExactScalar::term(make_rational(1, 3), make_rational(-60, 1));
  for (auto _ : state) benchmark::DoNotOptimize(compare(a, b));
}
BENCHMARK(BM_CompareClose)->Arg(3)->Arg(40)->Arg(400);

void BM_SumArithmetic(benchmark::State& state) {
  std::vector<ExactScalar> terms;
  for (long i = 1; i <= state.range(0); ++i) terms.push_back(ExactScalar::term(make_rational(i, 7), make_rational(-i, 5)));
  for (auto _ : state) {
    ExactScalar s;
    for (const auto& t : terms) s = s + t * t;
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_SumArithmetic)->Arg(8)->Arg(64);

void BM_Wedderburn(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(repalg::alternating_wedderburn(n, repalg::WedderburnMode::Enumerated));
}
BENCHMARK(BM_Wedderburn)->DenseRange(6, 12, 3);

void BM_WordDefect(benchmark::State& state) {
  const auto c = blockop::build_pqv_independent(state.range(0));
  std::set<long> S;
  for (long i = 0; i < state.range(0); ++i) S.insert(i);
  for (auto _ : state) benchmark::DoNotOptimize(tensortrace::word_noncommutation_defect(c, S, S));
}
BENCHMARK(BM_WordDefect)->Arg(2)->Arg(50);

void BM_JsMonteCarlo(benchmark::State& state) {
  using namespace jsstab;
  const auto Z = groups::Group::free_abelian(1);
  const auto act = std::shared_ptr<const groups::Action>(groups::make_translation_action(Z).release());
  const std::vector<WreathElement> F{{{}, Z.vector({0})}, {{{Z.vector({0}), Z.vector({1})}}, Z.vector({1})}, {{}, Z.vector({-1})}};
  const WreathModel model(Z, act, Z.vector({1}), F);
  const auto w = build_witness(model);
  for (auto _ : state) benchmark::DoNotOptimize(mc_estimate(model, w, 4, state.range(0), 7));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_JsMonteCarlo)->Arg(10000)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
