#include <benchmark/benchmark.h>

#include "dedb/magic.hpp"
#include "dedb/operators.hpp"
#include "dedb/parser.hpp"
#include "dedb/propagate.hpp"

namespace {

using namespace dedb;

Database chain(int n) {
    Database d;
    d.rules = {parse_rule("p(X,Y) :- e(X,Y)."), parse_rule("p(X,Y) :- e(X,Z), p(Z,Y).")};
    for (int i = 0; i < n; ++i)
        d.facts.push_back({"e", {Term::constant(std::to_string(i)),
                                 Term::constant(std::to_string(i + 1))}});
    return d;
}

void BM_transitive_closure(benchmark::State& state) {
    Database d = chain(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(iterated_fixpoint_model(d).positive.size());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_transitive_closure)->Range(16, 128)->Complexity();

void BM_propagate(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    Database d = chain(n);
    bool magic = state.range(1) != 0;
    // A localized change at the end of the chain.
    DeltaSet update;
    update.insertions = {{"e", {Term::constant(std::to_string(n)), Term::constant(std::to_string(n))}}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            propagate_update(d, update, magic ? PropagationMode::Magic : PropagationMode::Naive)
                .generated_total);
    }
}
BENCHMARK(BM_propagate)->Args({64, 0})->Args({64, 1})->Args({96, 0})->Args({96, 1});

void BM_magic_query(benchmark::State& state) {
    Database d = chain(static_cast<int>(state.range(0)));
    Atom query{"p", {Term::constant("0"), Term::constant("1")}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(answer_query(d, query, QueryEngine::Soft).derivable);
    }
}
BENCHMARK(BM_magic_query)->Range(16, 128);

}  // namespace

BENCHMARK_MAIN();
