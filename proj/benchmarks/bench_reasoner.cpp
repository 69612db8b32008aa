#include <benchmark/benchmark.h>

#include "dlbench/generator.hpp"
#include "dlbench/parser.hpp"
#include "dlbench/random_theory.hpp"
#include "dlbench/reasoner.hpp"
#include "dlbench/translator.hpp"

using namespace dlbench;

namespace {

void familyArgs(benchmark::internal::Benchmark* b) {
    for (int n : {64, 512, 4096, 32768}) b->Arg(n);
}

template <Family F>
void BM_Conclusions(benchmark::State& state) {
    const auto t = generate({F, static_cast<int>(state.range(0)), familyTakesK(F) ? std::optional<int>(2) : std::nullopt});
    for (auto _ : state) benchmark::DoNotOptimize(computeConclusions(t));
    state.counters["rules"] = static_cast<double>(t.rules().size());
    state.SetComplexityN(static_cast<benchmark::IterationCount>(t.rules().size()));
}
BENCHMARK(BM_Conclusions<Family::Chain>)->Apply(familyArgs)->Complexity();
BENCHMARK(BM_Conclusions<Family::Circles>)->Apply(familyArgs)->Complexity();
BENCHMARK(BM_Conclusions<Family::LevelsMinus>)->Apply(familyArgs)->Complexity();
BENCHMARK(BM_Conclusions<Family::Levels>)->Apply(familyArgs)->Complexity();
BENCHMARK(BM_Conclusions<Family::Dag>)->Apply(familyArgs)->Complexity();

void BM_ConclusionsHierarchies(benchmark::State& state) {
    const auto t = generate({Family::Hierarchies, static_cast<int>(state.range(0)), 4});
    for (auto _ : state) benchmark::DoNotOptimize(computeConclusions(t));
    state.counters["rules"] = static_cast<double>(t.rules().size());
}
BENCHMARK(BM_ConclusionsHierarchies)->DenseRange(2, 8, 2);

void BM_ConclusionsRandom(benchmark::State& state) {
    RandomTheoryParams p;
    p.maxAtoms = static_cast<std::size_t>(state.range(0));
    p.maxRules = p.maxAtoms * 2;
    std::vector<Theory> pool;
    for (std::uint64_t seed = 0; seed < 32; ++seed) pool.push_back(randomTheory(seed, p));
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(computeConclusions(pool[i++ % pool.size()]));
}
BENCHMARK(BM_ConclusionsRandom)->Arg(10)->Arg(100)->Arg(400);

void BM_OracleSmallRandom(benchmark::State& state) {
    const auto t = randomTheory(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) {
        for (const auto& q : t.literals()) benchmark::DoNotOptimize(bruteForceOracle(t, {ProofTag::PlusPartial, q}));
    }
}
BENCHMARK(BM_OracleSmallRandom)->Arg(1)->Arg(2)->Arg(3);

void BM_ParsePrint(benchmark::State& state) {
    const auto text = printTheory(generate({Family::Levels, static_cast<int>(state.range(0)), std::nullopt}));
    for (auto _ : state) {
        auto r = parseTheory(text);
        benchmark::DoNotOptimize(printTheory(*r.theory));
    }
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParsePrint)->Arg(256)->Arg(4096);

void BM_Render(benchmark::State& state) {
    const auto t = generate({Family::Hierarchies, static_cast<int>(state.range(0)), 2});
    for (auto _ : state) benchmark::DoNotOptimize(renderTheory(t));
}
BENCHMARK(BM_Render)->Arg(6)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
