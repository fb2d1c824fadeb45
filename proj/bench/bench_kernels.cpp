// Serial reference kernels vs their OpenMP versions, and the batch augment
// stage at different worker counts.
//
//   bench_kernels --benchmark_filter=Prior

#include <benchmark/benchmark.h>
#include <omp.h>

#include <filesystem>
#include <random>

#include "samaug/augment.hpp"
#include "samaug/dataset.hpp"
#include "samaug/f32p.hpp"
#include "samaug/kernels.hpp"

namespace fs = std::filesystem;
using namespace samaug;

namespace {

MaskSet make_masks(std::size_t side, std::size_t count) {
  std::mt19937_64 rng(side * 31 + count);
  std::uniform_int_distribution<std::size_t> pos(0, side - 1);
  MaskSet set{"bench", side, side, {}};
  for (std::size_t k = 0; k < count; ++k) {
    BinaryMask m(side, side);
    std::size_t r0 = pos(rng), r1 = pos(rng), c0 = pos(rng), c1 = pos(rng);
    if (r0 > r1) std::swap(r0, r1);
    if (c0 > c1) std::swap(c0, c1);
    for (std::size_t r = r0; r <= r1; ++r)
      for (std::size_t c = c0; c <= c1; ++c) m.set(r, c, true);
    set.entries.push_back({std::move(m), 0.9, "bench"});
  }
  return set;
}

ImageTensor make_image(std::size_t side) {
  std::mt19937_64 rng(side);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  std::vector<float> data(side * side * 3);
  for (auto& v : data) v = u(rng);
  return ImageTensor(side, side, 3, std::move(data));
}

template <bool Parallel>
void BM_AccumulatePrior(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto masks = make_masks(side, 20);
  for (auto _ : state) {
    auto acc = Parallel ? kernels::parallel::accumulate_prior(masks) : kernels::serial::accumulate_prior(masks);
    benchmark::DoNotOptimize(acc.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side * side * 20));
}

template <bool Parallel>
void BM_AddPrior(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto image = make_image(side);
  const auto prior = kernels::serial::binarize(kernels::serial::accumulate_prior(make_masks(side, 8)));
  const std::size_t channels[] = {0, 1, 2};
  ImageTensor out = image;
  for (auto _ : state) {
    if (Parallel) {
      kernels::parallel::add_prior(image, prior, channels, out);
    } else {
      kernels::serial::add_prior(image, prior, channels, out);
    }
    benchmark::DoNotOptimize(out.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side * side * 3));
}

template <bool Parallel>
void BM_ExteriorBoundary(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto masks = make_masks(side, 1);
  const auto& mask = masks.entries.front().mask;
  for (auto _ : state) {
    auto b = Parallel ? kernels::parallel::exterior_boundary(mask) : kernels::serial::exterior_boundary(mask);
    benchmark::DoNotOptimize(b.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(side * side));
}

// Whole-dataset augmentation with state.range(0) workers.
void BM_AugmentDataset(benchmark::State& state) {
  const auto root = fs::temp_directory_path() / "samaug_bench_dataset";
  fs::create_directories(root);
  DatasetManifest manifest;
  for (std::size_t i = 0; i < 32; ++i) {
    const auto id = "img" + std::to_string(i);
    write_f32p(make_image(128 + i), root / (id + ".f32p"));
    write_mask_manifest(root / (id + ".json"), make_masks(128 + i, 10));
    manifest.rows.push_back({id, root / (id + ".f32p"), root / (id + ".json"), i % 2});
  }
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto outcome = augment_dataset(manifest, AugmentMode::SamAugC, root / "out", ExportFormat::F32p, workers);
    benchmark::DoNotOptimize(outcome.failures.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(manifest.rows.size()));
  fs::remove_all(root);
}

}  // namespace

BENCHMARK(BM_AccumulatePrior<false>)->Name("AccumulatePrior/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_AccumulatePrior<true>)->Name("AccumulatePrior/omp")->Arg(256)->Arg(1024)->UseRealTime();
BENCHMARK(BM_AddPrior<false>)->Name("AddPrior/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_AddPrior<true>)->Name("AddPrior/omp")->Arg(256)->Arg(1024)->UseRealTime();
BENCHMARK(BM_ExteriorBoundary<false>)->Name("ExteriorBoundary/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_ExteriorBoundary<true>)->Name("ExteriorBoundary/omp")->Arg(256)->Arg(1024)->UseRealTime();
BENCHMARK(BM_AugmentDataset)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
