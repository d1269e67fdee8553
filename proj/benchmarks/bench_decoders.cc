// Decoder microbenchmarks over the reference two-description quantizer.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "jscmd/channel.hpp"
#include "jscmd/map_decoder.hpp"
#include "jscmd/mdq.hpp"
#include "jscmd/mmse_decoder.hpp"
#include "jscmd/source_model.hpp"

namespace {

using namespace jscmd;

struct Fixture {
    MdqCodebook cb;
    MarkovSourceModel model;
    std::vector<ChannelModel> channels;
    ReceivedSequence recv;

    Fixture(std::size_t l1, std::size_t spread, std::size_t n) {
        cb = build_2dsq(l1, spread, GaussMarkovSource{});
        model = derive_markov_model(GaussMarkovSource{0.9}, cb.boundaries);
        auto chi = generate(GaussMarkovSource{0.9, 42}, n);
        auto enc = encode(cb, chi);
        channels = {EecChannel{0.1, 0.01, 1}, EecChannel{0.1, 0.01, 2}};
        recv = transmit_streams(channels, enc, cb);
    }
};

const Fixture& fixture_for(std::size_t l1, std::size_t spread,
                           std::size_t n) {
    static std::vector<std::pair<std::uint64_t, Fixture>> cache;
    std::uint64_t key = (l1 << 32) | (spread << 16) | n;
    for (auto& [k, f] : cache)
        if (k == key) return f;
    cache.emplace_back(key, Fixture(l1, spread, n));
    return cache.back().second;
}

void BM_MapDecodeNaive(benchmark::State& state) {
    std::size_t l1 = static_cast<std::size_t>(state.range(0));
    const Fixture& f = fixture_for(l1, 1, 256);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            map_decode(f.model, f.cb, f.channels, f.recv));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MapDecodeNaive)->RangeMultiplier(2)->Range(16, 128)->Complexity();

void BM_MapDecodeFast(benchmark::State& state) {
    std::size_t l1 = static_cast<std::size_t>(state.range(0));
    const Fixture& f = fixture_for(l1, 1, 256);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            map_decode_fast(f.model, f.cb, f.channels, f.recv));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MapDecodeFast)->RangeMultiplier(2)->Range(16, 128)->Complexity();

void BM_ForwardBackward(benchmark::State& state) {
    const Fixture& f = fixture_for(8, 3, 1024);
    for (auto _ : state)
        benchmark::DoNotOptimize(
            forward_backward(f.model, f.cb, f.channels, f.recv));
}
BENCHMARK(BM_ForwardBackward);

void BM_MmseIid(benchmark::State& state) {
    const Fixture& f = fixture_for(8, 3, 1024);
    for (auto _ : state)
        benchmark::DoNotOptimize(mmse_decode_iid(f.cb, f.channels, f.recv));
}
BENCHMARK(BM_MmseIid);

void BM_HardDecode(benchmark::State& state) {
    const Fixture& f = fixture_for(8, 3, 1024);
    std::vector<int> tuple(2);
    for (auto _ : state) {
        auto indices = hard_decision_indices(f.recv, f.cb);
        double acc = 0.0;
        for (std::size_t n = 0; n < f.recv.n; ++n) {
            tuple[0] = indices[0][n];
            tuple[1] = indices[1][n];
            acc += hard_decode(f.cb, tuple).value_or(0.0);
        }
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_HardDecode);

} // namespace

BENCHMARK_MAIN();
