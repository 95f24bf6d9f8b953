#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "quscore/nifti.hpp"
#include "quscore/ranking.hpp"
#include "quscore/scoring.hpp"
#include "quscore/synth.hpp"

using namespace quscore;

namespace {

Phantom bench_phantom(const GridShape& shape) {
    PhantomParams params;
    params.shape = shape;
    params.tumor_fraction = 0.01;
    params.error_rate = 0.25;
    params.seed = 42;
    return make_phantom(params);
}

void BM_EntityCurve(benchmark::State& state) {
    const auto side = state.range(0);
    const Phantom phantom = bench_phantom(GridShape(side, side, side));
    const auto gt = extract_entity_masks(phantom.gt)[Entity::WholeTumor];
    const auto pred = extract_entity_masks(phantom.pred)[Entity::WholeTumor];
    const auto unc = gen_uncertainty(phantom, Entity::WholeTumor,
                                     GeneratorKind::NormalizedEntropy);
    const ThresholdGrid grid = ThresholdGrid::default_grid();
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_entity_curve(gt, pred, unc, grid));
    }
    state.SetItemsProcessed(state.iterations() * gt.shape.voxel_count());
}
BENCHMARK(BM_EntityCurve)->Arg(64)->Arg(128);

void BM_EvaluateFullSizeCase(benchmark::State& state) {
    const Phantom phantom = bench_phantom(GridShape(240, 240, 155));
    std::array<UncertaintyMap, 3> unc;
    for (Entity e : kEntities) {
        unc[static_cast<std::size_t>(e)] =
            gen_uncertainty(phantom, e, GeneratorKind::NormalizedEntropy);
    }
    const ThresholdGrid grid = ThresholdGrid::default_grid();
    for (auto _ : state) {
        benchmark::DoNotOptimize(evaluate_case(phantom.gt, phantom.pred, unc, grid));
    }
}
BENCHMARK(BM_EvaluateFullSizeCase)->Unit(benchmark::kMillisecond);

void BM_NiftiGzipRoundTrip(benchmark::State& state) {
    const auto side = state.range(0);
    const Phantom phantom = bench_phantom(GridShape(side, side, side));
    const auto unc = gen_uncertainty(phantom, Entity::WholeTumor,
                                     GeneratorKind::NormalizedEntropy);
    const auto path = std::filesystem::temp_directory_path() / "quscore_bench.nii.gz";
    for (auto _ : state) {
        write_uncertainty(path, unc);
        benchmark::DoNotOptimize(read_nifti(path));
    }
    state.SetBytesProcessed(state.iterations() * unc.shape.voxel_count() * 4);
    std::filesystem::remove(path);
}
BENCHMARK(BM_NiftiGzipRoundTrip)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_PermutationTest(benchmark::State& state) {
    const auto cases = static_cast<std::size_t>(state.range(0));
    std::vector<double> crs_a(cases), crs_b(cases);
    std::mt19937_64 rng(7);
    for (std::size_t i = 0; i < cases; ++i) {
        crs_a[i] = 3.0 + 0.5 * static_cast<double>(rng() % 40);
        crs_b[i] = 3.0 + 0.5 * static_cast<double>(rng() % 40);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            permutation_test(crs_a, crs_b, 100000, 11, PermutationMode::MonteCarlo));
    }
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_PermutationTest)->Arg(166)->Unit(benchmark::kMillisecond);

void BM_MakePhantom(benchmark::State& state) {
    const auto side = state.range(0);
    PhantomParams params;
    params.shape = GridShape(side, side, side);
    params.tumor_fraction = 0.01;
    params.error_rate = 0.25;
    for (auto _ : state) {
        params.seed += 1;
        benchmark::DoNotOptimize(make_phantom(params));
    }
}
BENCHMARK(BM_MakePhantom)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
