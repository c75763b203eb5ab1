#include <benchmark/benchmark.h>

#include <random>

#include "twist/cayley.hpp"
#include "twist/witnesses.hpp"

namespace {

using namespace twist;

Group lamplighter2() { return Group(GroupSpec{GroupKind::Lamplighter, 2, 0, 0, {}}); }

Alphabet lamp_alphabet(const Group& g) {
    return make_alphabet(g, {g.zero(), g.integer_element(1)}, true);
}

std::vector<GroupElement> random_elements(const Group& g, int count) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::int64_t> shift(-6, 6);
    std::uniform_int_distribution<std::int64_t> pos(-8, 8);
    std::vector<GroupElement> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        std::vector<std::pair<std::int64_t, std::int64_t>> lamps;
        for (int j = 0; j < 4; ++j) lamps.emplace_back(pos(rng), 1);
        out.push_back(GroupElement{shift(rng), g.lamp_element(std::move(lamps))});
    }
    return out;
}

void BM_GroupMultiplyLamplighter(benchmark::State& state) {
    Group g = lamplighter2();
    std::vector<GroupElement> xs = random_elements(g, 256);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(g.multiply(xs[i % 256], xs[(i + 13) % 256]));
        ++i;
    }
}
BENCHMARK(BM_GroupMultiplyLamplighter);

void BM_GroupMultiplyBs(benchmark::State& state) {
    Group g(GroupSpec{GroupKind::BaumslagSolitar, 0, 3, 0, {}});
    std::mt19937 rng(7);
    std::uniform_int_distribution<std::int64_t> shift(-6, 6);
    std::uniform_int_distribution<std::int64_t> num(-500, 500);
    std::vector<GroupElement> xs;
    for (int i = 0; i < 256; ++i)
        xs.push_back(GroupElement{shift(rng), g.bs_element(num(rng), i % 4)});
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(g.multiply(xs[i % 256], xs[(i + 13) % 256]));
        ++i;
    }
}
BENCHMARK(BM_GroupMultiplyBs);

void BM_PackUnpack(benchmark::State& state) {
    Group g = lamplighter2();
    std::vector<GroupElement> xs = random_elements(g, 256);
    std::vector<std::uint8_t> buf;
    std::size_t i = 0;
    for (auto _ : state) {
        buf.clear();
        g.pack(xs[i % 256], buf);
        benchmark::DoNotOptimize(g.unpack(buf.data(), buf.size()));
        ++i;
    }
}
BENCHMARK(BM_PackUnpack);

void BM_BallBuild(benchmark::State& state) {
    Group g = lamplighter2();
    GeneratingSet gens = build_unbound_gens(g, lamp_alphabet(g));
    const std::int64_t radius = state.range(0);
    for (auto _ : state) {
        BallIndex ball = BallIndex::build(g, gens, radius);
        benchmark::DoNotOptimize(ball.size());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(BallIndex::build(g, gens, radius).size()));
}
BENCHMARK(BM_BallBuild)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_MinimalTwords(benchmark::State& state) {
    Group g(GroupSpec{GroupKind::BaumslagSolitar, 0, 3, 0, {}});
    std::vector<ModuleElement> letters{g.integer_element(-1), g.zero(), g.integer_element(1)};
    Alphabet a = make_alphabet(g, std::move(letters), true);
    ModuleElement target = g.bs_element(3 * 3 * 3 + 3 * 3 + 3 + 2, 0);
    for (auto _ : state)
        benchmark::DoNotOptimize(minimal_twords(g, a, target, Window{-4, 8}, 10));
}
BENCHMARK(BM_MinimalTwords);

void BM_DigitExpand(benchmark::State& state) {
    Group g(GroupSpec{GroupKind::MatrixModule, 0, 0, 1, {BigInt(3)}});
    DigitSystem system(g, 2);
    ModuleElement k = g.integer_element(59049 + 41);
    for (auto _ : state) benchmark::DoNotOptimize(system.expand(k, 64));
}
BENCHMARK(BM_DigitExpand);

void BM_Depth(benchmark::State& state) {
    Group g = lamplighter2();
    Alphabet a = lamp_alphabet(g);
    GeneratingSet gens = build_unbound_gens(g, a);
    BallIndex ball = BallIndex::build(g, gens, 10);
    std::uint32_t id = *ball.find(deep_element(g, a, 1, 2));
    for (auto _ : state) benchmark::DoNotOptimize(depth(ball, id, 32));
}
BENCHMARK(BM_Depth);

} // namespace

BENCHMARK_MAIN();
