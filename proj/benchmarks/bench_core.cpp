#include <benchmark/benchmark.h>

#include "hybridsom/baselines.hpp"
#include "hybridsom/hybrid.hpp"
#include "hybridsom/lvq.hpp"
#include "hybridsom/rng.hpp"

namespace hs = hybridsom;

namespace {

std::vector<hs::UnitVector> random_units(std::size_t count, std::size_t n, std::uint64_t seed) {
    hs::Rng rng(seed);
    std::vector<hs::UnitVector> out;
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> v(n);
        for (auto& c : v) c = rng.normal();
        out.emplace_back(std::move(v));
    }
    return out;
}

void BM_FindWinner(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const hs::Codebook cb = hs::Codebook::random(m, 12, 1);
    const auto xs = random_units(256, 12, 2);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(hs::find_winner(xs[i++ % xs.size()], cb));
    }
}
BENCHMARK(BM_FindWinner)->Arg(2)->Arg(16)->Arg(128);

void BM_HybridStep(benchmark::State& state) {
    const auto xs = random_units(1024, 12, 3);
    std::vector<hs::TrainingEvent> events;
    std::vector<std::optional<hs::ClassId>> labels;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::optional<hs::ClassId> label;
        if (i % 3 != 0) label = static_cast<hs::ClassId>(xs[i][0] > 0.0);
        events.push_back({xs[i], label});
        labels.push_back(label);
    }
    hs::HybridConfig cfg;
    cfg.pushback_mode = static_cast<hs::PushbackMode>(state.range(0));
    hs::HybridNetwork net = hs::HybridNetwork::initialize(xs, labels, cfg);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(net.step(events[i++ % events.size()]));
    }
}
BENCHMARK(BM_HybridStep)->Arg(static_cast<int>(hs::PushbackMode::fixed_eta))->Arg(static_cast<int>(hs::PushbackMode::equidistant));

void BM_PushbackRate(benchmark::State& state) {
    const auto xs = random_units(3 * 256, 12, 4);
    std::size_t i = 0;
    for (auto _ : state) {
        const std::size_t k = 3 * (i++ % 256);
        const bool order = hs::activation(xs[k], xs[k + 2]) >= hs::activation(xs[k + 1], xs[k + 2]);
        benchmark::DoNotOptimize(hs::pushback_rate(order ? xs[k] : xs[k + 1], order ? xs[k + 1] : xs[k], xs[k + 2]));
    }
}
BENCHMARK(BM_PushbackRate);

void BM_FcmFit(benchmark::State& state) {
    const auto rows_n = static_cast<std::size_t>(state.range(0));
    hs::Rng rng(5);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < rows_n; ++i) {
        std::vector<double> v(12);
        for (auto& c : v) c = rng.normal() + (i % 2 ? 2.0 : -2.0);
        rows.push_back(std::move(v));
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(hs::fcm_fit(rows, 2, 2.0, 1e-6, 300, 1));
    }
}
BENCHMARK(BM_FcmFit)->Arg(300)->Arg(3000);

}  // namespace
BENCHMARK_MAIN();
