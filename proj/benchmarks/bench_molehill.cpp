// Micro-benchmarks for the paths that dominate wall time in practice:
// smoothing/derivative filters, kernel matching, RDP, clustering, and the
// end-to-end detection and analysis entry points.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "molehill/chart.hpp"
#include "molehill/dataset.hpp"
#include "molehill/detect.hpp"
#include "molehill/rng.hpp"
#include "molehill/semantics.hpp"
#include "molehill/sigproc.hpp"

namespace {

using namespace molehill;

Signal random_walk(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(mix_seed(seed));
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    double y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = static_cast<double>(i);
        y += uniform_real(gen, -1.5, 1.5);
        ys[i] = y;
    }
    return Signal(std::move(xs), std::move(ys));
}

// Four fully annotated charts: three words per segment drawn round-robin from
// a small vocabulary, so words repeat across segments and the co-occurrence
// and clustering paths have real work to do.
const AnnotationDataset& bench_dataset() {
    static const AnnotationDataset ds = [] {
        // Alternating parts of speech so every segment's word triple mixes
        // adjectives and verbs (the pair-slope table needs shared segments).
        const std::vector<std::pair<std::string, Pos>> vocab = {
            {"steep", Pos::Adjective},  {"rising", Pos::Verb},
            {"gradual", Pos::Adjective}, {"falling", Pos::Verb},
            {"sharp", Pos::Adjective},  {"climbing", Pos::Verb},
            {"flat", Pos::Adjective},   {"dropping", Pos::Verb},
            {"rapid", Pos::Adjective},  {"plateauing", Pos::Verb},
            {"steady", Pos::Adjective}, {"recovering", Pos::Verb},
        };
        auto charts = generate_batch(7, 4);
        Lexicon lexicon;
        for (const auto& [word, pos] : vocab) lexicon[word] = pos;
        std::vector<AnnotationRecord> records;
        std::int64_t ts = 1600000000;
        std::size_t next = 0;
        for (std::size_t c = 0; c < charts.size(); ++c) {
            for (int seg = 0; seg < kSegmentsPerChart; ++seg) {
                for (int k = 0; k < 3; ++k) {
                    AnnotationRecord r;
                    r.participant_id = "p" + std::to_string((c + k) % 5);
                    r.chart_id = charts[c].id;
                    r.x_position = kChartXMin + seg * kSegmentWidth + 5.0;
                    r.word = vocab[next++ % vocab.size()].first;
                    r.timestamp = ts++;
                    records.push_back(std::move(r));
                }
            }
        }
        return make_dataset(std::move(charts), std::move(records), std::move(lexicon));
    }();
    return ds;
}

const std::vector<Kernel>& bench_kernels() {
    static const std::vector<Kernel> kernels = build_kernels(bench_dataset());
    return kernels;
}

ClusterMatrix random_matrix(int n, std::uint64_t seed) {
    std::mt19937_64 gen(mix_seed(seed));
    ClusterMatrix m;
    m.values.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        m.words.push_back("w" + std::to_string(i));
        m.values[i][i] = 1.0;
        for (int j = 0; j < i; ++j) m.values[i][j] = m.values[j][i] = uniform_unit(gen);
    }
    return m;
}

void BM_savgol(benchmark::State& state) {
    const auto sig = random_walk(static_cast<std::size_t>(state.range(0)), 11);
    for (auto _ : state) benchmark::DoNotOptimize(savgol(sig, 13, 2));
}
BENCHMARK(BM_savgol)->Arg(71)->Arg(512)->Arg(4096);

void BM_first_derivative(benchmark::State& state) {
    const auto sig = random_walk(static_cast<std::size_t>(state.range(0)), 12);
    for (auto _ : state) benchmark::DoNotOptimize(first_derivative(sig, 13, 2));
}
BENCHMARK(BM_first_derivative)->Arg(71)->Arg(512)->Arg(4096);

void BM_windowed_mae(benchmark::State& state) {
    const auto kernel = random_walk(51, 21);
    const auto sig = random_walk(static_cast<std::size_t>(state.range(0)), 22);
    for (auto _ : state) benchmark::DoNotOptimize(windowed_mae(kernel, sig));
}
BENCHMARK(BM_windowed_mae)->Arg(512)->Arg(4096);

void BM_rdp(benchmark::State& state) {
    const auto sig = random_walk(static_cast<std::size_t>(state.range(0)), 31);
    for (auto _ : state) benchmark::DoNotOptimize(rdp_indices(sig, 1.0));
}
BENCHMARK(BM_rdp)->Arg(256)->Arg(2048);

void BM_generate_batch(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(generate_batch(41, 100));
}
BENCHMARK(BM_generate_batch);

void BM_build_kernels(benchmark::State& state) {
    const auto& ds = bench_dataset();
    for (auto _ : state) benchmark::DoNotOptimize(build_kernels(ds));
}
BENCHMARK(BM_build_kernels);

void BM_find_shapes(benchmark::State& state) {
    const auto& kernels = bench_kernels();
    const auto sig = random_walk(static_cast<std::size_t>(state.range(0)), 51);
    for (auto _ : state) benchmark::DoNotOptimize(find_shapes(sig, kernels, DetectionParams{}));
}
BENCHMARK(BM_find_shapes)->Arg(200)->Arg(400);

void BM_find_shapes_threads(benchmark::State& state) {
    const auto& kernels = bench_kernels();
    const auto sig = random_walk(400, 51);
    const auto threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(find_shapes_with_threads(sig, kernels, DetectionParams{}, threads));
    }
}
BENCHMARK(BM_find_shapes_threads)->Arg(1)->Arg(2)->Arg(4);

void BM_label_slopes(benchmark::State& state) {
    const auto table = pair_slope_table(bench_dataset());
    const auto sig = random_walk(512, 61);
    for (auto _ : state) benchmark::DoNotOptimize(label_slopes(sig, table, 0.05));
}
BENCHMARK(BM_label_slopes);

void BM_ward_cluster(benchmark::State& state) {
    const auto m = random_matrix(static_cast<int>(state.range(0)), 71);
    for (auto _ : state) benchmark::DoNotOptimize(ward_cluster(m));
}
BENCHMARK(BM_ward_cluster)->Arg(16)->Arg(64);

void BM_analyze(benchmark::State& state) {
    const auto& ds = bench_dataset();
    for (auto _ : state) benchmark::DoNotOptimize(analyze(ds));
}
BENCHMARK(BM_analyze);

}  // namespace

BENCHMARK_MAIN();
