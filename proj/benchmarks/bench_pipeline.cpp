#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "darac/eval.hpp"
#include "darac/head.hpp"
#include "darac/image.hpp"
#include "darac/losses.hpp"
#include "darac/pooling.hpp"
#include "darac/postprocess.hpp"
#include "darac/regions.hpp"
#include "darac/tensor.hpp"
#include "darac/training.hpp"

namespace {

using namespace darac;

FeatureMapSet random_maps(int channels, int height, int width, std::uint64_t seed) {
    SeededRng rng(seed);
    std::vector<double> values(static_cast<std::size_t>(channels) * height * width);
    for (double& v : values) v = rng.uniform();
    return FeatureMapSet(channels, height, width, std::move(values));
}

std::vector<Vector> random_embeddings(int count, int dim, std::uint64_t seed) {
    SeededRng rng(seed);
    std::vector<Vector> rows(static_cast<std::size_t>(count), Vector(dim));
    for (auto& row : rows) {
        for (double& x : row) x = rng.uniform(-1.0, 1.0);
    }
    return rows;
}

std::vector<int> block_labels(int count, int group) {
    std::vector<int> labels(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) labels[static_cast<std::size_t>(i)] = i / group;
    return labels;
}

void bm_rmac_regions(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(rmac_regions(16, 12));
    }
}
BENCHMARK(bm_rmac_regions)->Unit(benchmark::kMicrosecond);

void bm_pooled_matrix(benchmark::State& state) {
    const FeatureMapSet maps = random_maps(64, 6, 8, 1);
    const RegionGrid grid = with_global(rmac_regions(8, 6), 8, 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pooled_matrix(maps, grid));
    }
}
BENCHMARK(bm_pooled_matrix)->Unit(benchmark::kMicrosecond);

void bm_nra_loss(benchmark::State& state) {
    const std::vector<Vector> embeddings = random_embeddings(64, 128, 2);
    const std::vector<int> labels = block_labels(64, 4);
    const NraConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(nra_loss(embeddings, labels, cfg));
    }
}
BENCHMARK(bm_nra_loss)->Unit(benchmark::kMicrosecond);

void bm_nra_loss_grad(benchmark::State& state) {
    const std::vector<Vector> embeddings = random_embeddings(64, 128, 3);
    const std::vector<int> labels = block_labels(64, 4);
    const NraConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(nra_loss_grad(embeddings, labels, cfg));
    }
}
BENCHMARK(bm_nra_loss_grad)->Unit(benchmark::kMicrosecond);

void bm_head_forward_train(benchmark::State& state) {
    SeededRng rng(4);
    HeadParams params = head_init(16, 128, rng);
    std::vector<PooledMatrix> batch;
    for (int b = 0; b < 64; ++b) {
        PooledMatrix m(kPooledRows, 128);
        for (double& x : m.data) x = rng.uniform();
        batch.push_back(std::move(m));
    }
    for (auto _ : state) {
        HeadParams work = params;
        benchmark::DoNotOptimize(head_forward(batch, work, HeadMode::Train));
    }
}
BENCHMARK(bm_head_forward_train)->Unit(benchmark::kMicrosecond);

void bm_head_backward(benchmark::State& state) {
    SeededRng rng(5);
    HeadParams params = head_init(16, 128, rng);
    std::vector<PooledMatrix> batch;
    for (int b = 0; b < 64; ++b) {
        PooledMatrix m(kPooledRows, 128);
        for (double& x : m.data) x = rng.uniform();
        batch.push_back(std::move(m));
    }
    HeadForwardCache cache;
    head_forward(batch, params, HeadMode::Train, &cache);
    std::vector<Vector> grad_embeddings(64, Vector(128));
    for (auto& row : grad_embeddings) {
        for (double& x : row) x = rng.uniform(-1.0, 1.0);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(head_backward(cache, grad_embeddings));
    }
}
BENCHMARK(bm_head_backward)->Unit(benchmark::kMicrosecond);

void bm_knn(benchmark::State& state) {
    SeededRng rng(6);
    RetrievalIndex index;
    for (int i = 0; i < 1000; ++i) {
        index.names.push_back("item" + std::to_string(i));
        Vector v(128);
        for (double& x : v) x = rng.uniform(-1.0, 1.0);
        index.descriptors.push_back(std::move(v));
    }
    Vector query(128);
    for (double& x : query) x = rng.uniform(-1.0, 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(knn(index, query, 10));
    }
}
BENCHMARK(bm_knn)->Unit(benchmark::kMicrosecond);

void bm_fit_whitening(benchmark::State& state) {
    const std::vector<Vector> samples = random_embeddings(256, 64, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_whitening(samples));
    }
}
BENCHMARK(bm_fit_whitening)->Unit(benchmark::kMicrosecond);

void bm_toy_extract(benchmark::State& state) {
    SeededRng rng(8);
    Image img(96, 96);
    for (double& p : img.pixels) p = rng.uniform();
    const ToyExtractor extractor(8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(extractor.extract(img));
    }
}
BENCHMARK(bm_toy_extract)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
