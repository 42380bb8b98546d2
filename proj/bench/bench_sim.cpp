// OpenMP trial loop vs the serial reference, and the epsilon sweep likewise.
#include <benchmark/benchmark.h>

#include "fibft/circuit.hpp"
#include "fibft/recursion.hpp"
#include "fibft/sim.hpp"

namespace {

using namespace fibft;

const NoiseParams kNoise{3e-3, NoiseModel::IndependentDepolarizing};

void BM_BellPairParallel(benchmark::State& state) {
    const Circuit c = build_bp_circuit(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trials(c, kNoise, 2000, 7, SimMode::PostselectBP));
    }
    state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_BellPairSerial(benchmark::State& state) {
    const Circuit c = build_bp_circuit(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trials_serial(c, kNoise, 2000, 7, SimMode::PostselectBP));
    }
    state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_GadgetParallel(benchmark::State& state) {
    const Circuit c = build_cnot_gadget(1);
    for (auto _ : state) benchmark::DoNotOptimize(run_trials(c, kNoise, 2000, 7, SimMode::GadgetAccept));
    state.SetItemsProcessed(state.iterations() * 2000);
}

void BM_GadgetSerial(benchmark::State& state) {
    const Circuit c = build_cnot_gadget(1);
    for (auto _ : state) benchmark::DoNotOptimize(run_trials_serial(c, kNoise, 2000, 7, SimMode::GadgetAccept));
    state.SetItemsProcessed(state.iterations() * 2000);
}

std::vector<double> grid() {
    std::vector<double> g;
    for (int k = 1; k <= 200; k++) g.push_back(k * 1e-5);
    return g;
}

void BM_CurvesParallel(benchmark::State& state) {
    const auto g = grid();
    for (auto _ : state) benchmark::DoNotOptimize(curves(NoiseModel::LocalStochastic, g, 10));
}

void BM_CurvesSerial(benchmark::State& state) {
    const auto g = grid();
    for (auto _ : state) benchmark::DoNotOptimize(curves_serial(NoiseModel::LocalStochastic, g, 10));
}

}  // namespace

BENCHMARK(BM_BellPairParallel)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BellPairSerial)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GadgetParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GadgetSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurvesParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurvesSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
