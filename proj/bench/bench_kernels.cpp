// Serial reference vs the chunked OpenMP kernel on coarse grids.
// Thread count is the second benchmark argument for the kernel runs.

#include "handopt/hand_model.hpp"
#include "handopt/metrics.hpp"

#include <benchmark/benchmark.h>

using namespace handopt;

namespace {

struct Case {
    SerialChain chain;
    JointGrid grid;
};

const Case& bench_case(int which) {
    static const HandModel model = HandModel::defaults();
    static const Case thumb{model.thumb_chain({17, 17, 17}), build_joint_grid(model.thumb.ranges, 10)};
    static const Case finger{model.finger_chain({15, 15, 15}, Finger::Index), build_joint_grid(model.finger.ranges, 5)};
    return which == 0 ? thumb : finger;
}

void label(benchmark::State& state, const Case& c) {
    state.SetLabel(c.chain.dof() == 5 ? "thumb" : "finger");
    state.counters["configs/s"] =
        benchmark::Counter(static_cast<double>(c.grid.size()), benchmark::Counter::kIsIterationInvariantRate);
}

void BM_reference_manipulability(benchmark::State& state) {
    const Case& c = bench_case(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reference::global_manipulability(c.chain, c.grid));
    label(state, c);
}

void BM_reference_voxels(benchmark::State& state) {
    const Case& c = bench_case(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reference::workspace_voxels(c.chain, c.grid, 0.05));
    label(state, c);
}

void BM_kernel_sweep(benchmark::State& state) {
    const Case& c = bench_case(static_cast<int>(state.range(0)));
    const SweepOptions opt{true, {0.05}, static_cast<int>(state.range(1))};
    for (auto _ : state) benchmark::DoNotOptimize(sweep_chain(c.chain, c.grid, opt));
    label(state, c);
}

void BM_reference_points(benchmark::State& state) {
    const Case& c = bench_case(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(reference::sample_workspace(c.chain, c.grid));
    label(state, c);
}

void BM_kernel_points(benchmark::State& state) {
    const Case& c = bench_case(static_cast<int>(state.range(0)));
    const int jobs = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(sample_workspace(c.chain, c.grid, jobs));
    label(state, c);
}

}  // namespace

BENCHMARK(BM_reference_manipulability)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_reference_voxels)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kernel_sweep)->ArgsProduct({{0, 1}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_reference_points)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_kernel_points)->ArgsProduct({{0, 1}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
