#include <random>

#include <benchmark/benchmark.h>

#include "pmuguard/attack.hpp"
#include "pmuguard/detector.hpp"
#include "pmuguard/experiment.hpp"
#include "pmuguard/grid_sim.hpp"
#include "pmuguard/mlp.hpp"

using namespace pmuguard;

namespace {

mlp::Matrix random_batch(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    mlp::Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = u(rng);
    return m;
}

void BM_Forward(benchmark::State& state) {
    const auto net = mlp::initialize(mlp::default_layer_sizes(), 1);
    const auto x = random_batch(state.range(0), 5, 2);
    for (auto _ : state) benchmark::DoNotOptimize(mlp::forward_batch(net, x));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Forward)->Arg(1)->Arg(64)->Arg(10000);

void BM_Backward(benchmark::State& state) {
    const auto net = mlp::initialize(mlp::default_layer_sizes(), 1);
    const auto x = random_batch(state.range(0), 5, 3);
    const mlp::Matrix t = (random_batch(state.range(0), 5, 4).array() > 0.0).cast<double>();
    for (auto _ : state) benchmark::DoNotOptimize(mlp::backward(net, x, t));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Backward)->Arg(64)->Arg(1024);

void BM_Discretize(benchmark::State& state) {
    const auto model = grid::build_swing_model(grid::default_swing_parameters());
    const auto full = grid::assemble_full_system(model);
    for (auto _ : state) benchmark::DoNotOptimize(grid::discretize(full.a, full.b, 0.02));
}
BENCHMARK(BM_Discretize);

void BM_Simulate(benchmark::State& state) {
    const auto model = grid::build_swing_model(grid::default_swing_parameters());
    grid::SimConfig cfg;
    cfg.seed = 1;
    for (auto _ : state) benchmark::DoNotOptimize(grid::simulate(model, cfg));
}
BENCHMARK(BM_Simulate)->Unit(benchmark::kMicrosecond);

void BM_GenerateDataset(benchmark::State& state) {
    const auto params = grid::default_swing_parameters();
    for (auto _ : state) benchmark::DoNotOptimize(eval::generate_dataset(params, eval::DatasetRecipe{}));
}
BENCHMARK(BM_GenerateDataset)->Unit(benchmark::kMillisecond);

void BM_Pipeline(benchmark::State& state) {
    const auto net = mlp::initialize(mlp::default_layer_sizes(), 1);
    const auto gen = eval::generate_scenario(grid::default_swing_parameters(), {}, 5, "bench");
    for (auto _ : state) benchmark::DoNotOptimize(detect::run_pipeline(net, gen.dataset, {0.5}));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(gen.dataset.rows()));
}
BENCHMARK(BM_Pipeline)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
