#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "molehill/detect.hpp"
#include "molehill/errors.hpp"
#include "molehill/rng.hpp"

#include "support.hpp"

using namespace molehill;

namespace {

std::vector<double> unit_xs(std::size_t n) {
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = static_cast<double>(i);
    return xs;
}

Signal unit_signal(std::vector<double> ys) {
    auto xs = unit_xs(ys.size());  // sized before the move
    return Signal(std::move(xs), std::move(ys));
}

/// First fixture kernel at the requested depth whose shape actually moves.
const Kernel& lively_kernel(double depth = 1.0) {
    static const std::vector<Kernel> kernels = build_kernels(testsupport::fixture_dataset());
    for (const Kernel& k : kernels) {
        const auto [lo, hi] = std::minmax_element(k.ys.begin(), k.ys.end());
        if (k.depth == depth && *hi - *lo > 1.0) return k;
    }
    throw std::runtime_error("fixture has no usable kernel");
}

std::set<int> covered_indices(const std::vector<LabeledRegion>& regions) {
    std::set<int> out;
    for (const auto& r : regions)
        for (int i = r.start_index; i <= r.end_index; ++i) out.insert(i);
    return out;
}

double cover_iou(const LabeledRegion& r, int lo, int hi) {
    const int inter = std::min(r.cover_end, hi) - std::max(r.cover_start, lo) + 1;
    if (inter <= 0) return 0.0;
    const int uni = std::max(r.cover_end, hi) - std::min(r.cover_start, lo) + 1;
    return static_cast<double>(inter) / uni;
}

}  // namespace

TEST_SUITE("detect") {

TEST_CASE("kernel construction covers two segments each side of the annotation") {
    const auto& ds = testsupport::fixture_dataset();
    const auto kernels = build_kernels(ds);
    // 16 fully annotated charts: 112 segments, ten depth variants apiece.
    REQUIRE(kernels.size() == 1120);

    const auto counts = segment_counts(ds);
    for (std::size_t i = 0; i < kernels.size(); ++i) {
        const Kernel& k = kernels[i];
        const int lo = std::max(0, k.source.segment_index - 2);
        const int hi = std::min(6, k.source.segment_index + 2);
        CHECK(k.segments_covered == hi - lo + 1);
        CHECK(k.ys.size() == static_cast<std::size_t>(k.segments_covered) * 10 + 1);
        CHECK(k.depth == (static_cast<double>(i % 10) + 1.0) / 10.0);

        // Every distinct word on the centre segment rides along.
        std::set<std::string> want;
        for (const auto& [word, n] : counts.at(k.source)) want.insert(word);
        CHECK(std::set<std::string>(k.words.begin(), k.words.end()) == want);

        // The samples are the chart's own unscaled values over the window.
        const auto unscaled = ds.charts.at(k.source.chart_id).unscaled_ys();
        CHECK(k.ys.front() == unscaled[static_cast<std::size_t>(lo) * 10]);
        CHECK(k.ys.back() == unscaled[static_cast<std::size_t>(hi) * 10 + 10]);
    }

    // Ordered by chart, segment, then depth.
    for (std::size_t i = 1; i < kernels.size(); ++i) {
        const auto a = std::make_tuple(kernels[i - 1].source.chart_id,
                                       kernels[i - 1].source.segment_index, kernels[i - 1].depth);
        const auto b = std::make_tuple(kernels[i].source.chart_id,
                                       kernels[i].source.segment_index, kernels[i].depth);
        CHECK(a < b);
    }

    SUBCASE("edge segments give 31 samples, next-in 41, interior 51") {
        std::map<int, std::size_t> by_segment;
        for (const auto& k : kernels)
            if (k.source.chart_id == kernels.front().source.chart_id)
                by_segment[k.source.segment_index] = k.ys.size();
        CHECK(by_segment.at(0) == 31);
        CHECK(by_segment.at(1) == 41);
        CHECK(by_segment.at(2) == 51);
        CHECK(by_segment.at(3) == 51);
        CHECK(by_segment.at(4) == 51);
        CHECK(by_segment.at(5) == 41);
        CHECK(by_segment.at(6) == 31);
    }

    CHECK_THROWS_AS(build_kernels(AnnotationDataset{}), EmptyDatasetError);
}

TEST_CASE("qualifying points merge into runs by gap") {
    using Runs = std::vector<std::pair<int, int>>;
    CHECK(merge_qualifying_points({10, 11, 13, 30}, 2) == Runs{{10, 13}, {30, 30}});
    CHECK(merge_qualifying_points({}, 2) == Runs{});
    CHECK(merge_qualifying_points({5}, 0) == Runs{{5, 5}});
    CHECK(merge_qualifying_points({1, 2, 3}, 0) == Runs{{1, 1}, {2, 2}, {3, 3}});
    CHECK(merge_qualifying_points({1, 2, 4}, 1) == Runs{{1, 2}, {4, 4}});
    // Unsorted, duplicated input is tolerated.
    CHECK(merge_qualifying_points({13, 10, 11, 10, 30}, 2) == Runs{{10, 13}, {30, 30}});
    CHECK(merge_qualifying_points({0, 3, 6, 9}, 3) == Runs{{0, 9}});
}

TEST_CASE("a signal equal to a kernel is found at offset zero with zero error") {
    const Kernel& k = lively_kernel(1.0);
    const Signal signal = unit_signal(k.ys);
    const auto regions = find_shapes_with_threads(signal, {k}, DetectionParams{}, 1);
    REQUIRE(regions.size() == 1);
    const LabeledRegion& r = regions.front();
    CHECK(r.start_index == 0);
    CHECK(r.end_index == 0);
    CHECK(r.cover_start == 0);
    CHECK(r.cover_end == static_cast<int>(k.ys.size()) - 1);
    CHECK(r.x_start == signal.xs.front());
    CHECK(r.x_end == signal.xs.back());
    CHECK(r.best_mae == 0.0);
    REQUIRE(r.words.size() == k.words.size());
    for (const auto& wv : r.words) CHECK(wv.votes == 1);
}

TEST_CASE("a kernel planted in a triangle-wave background is recovered") {
    // The background sweeps the kernel's own value corridor with straight
    // ramps (half-period 10) and meets the plant seamlessly at both ends, so
    // its smoothed derivative stays large everywhere except at the plant.
    const Kernel& base = lively_kernel(1.0);
    const int klen = static_cast<int>(base.ys.size());
    const int offset = 60;
    const double kmin = *std::min_element(base.ys.begin(), base.ys.end());
    const double kmax = *std::max_element(base.ys.begin(), base.ys.end());
    const double cap = kmax - kmin;

    std::vector<double> ys(120);
    const int total = static_cast<int>(ys.size());
    for (int i = 0; i < klen; ++i)
        ys[static_cast<std::size_t>(offset + i)] = base.ys[static_cast<std::size_t>(i)] - kmin;
    const auto fold = [cap](double v) {
        const double span = 2.0 * cap;
        v = std::fmod(v, span);
        if (v < 0.0) v += span;
        return v <= cap ? v : span - v;
    };
    const double slope = cap / 10.0;
    const double l0 = ys[static_cast<std::size_t>(offset)];
    const double l1 = ys[static_cast<std::size_t>(offset + klen - 1)];
    for (int i = 0; i < offset; ++i) ys[static_cast<std::size_t>(i)] = fold(l0 - slope * (offset - i));
    for (int i = offset + klen; i < total; ++i)
        ys[static_cast<std::size_t>(i)] = fold(l1 + slope * (i - (offset + klen - 1)));

    const auto regions = find_shapes(unit_signal(ys), {base}, DetectionParams{});
    REQUIRE_FALSE(regions.empty());
    double best = 0.0;
    for (const auto& r : regions) best = std::max(best, cover_iou(r, offset, offset + klen - 1));
    CHECK(best >= 0.5);
}

TEST_CASE("thread count never changes the result") {
    const auto& ds = testsupport::fixture_dataset();
    const auto all = build_kernels(ds);
    const std::string chart_a = all.front().source.chart_id;
    std::vector<Kernel> kernels;
    for (const auto& k : all)
        if (k.source.chart_id == chart_a) kernels.push_back(k);
    REQUIRE(kernels.size() == 70);

    auto chart_it = ds.charts.begin();
    ++chart_it;
    const Signal signal = unit_signal(chart_it->second.unscaled_ys());

    const auto one = find_shapes_with_threads(signal, kernels, DetectionParams{}, 1);
    const auto four = find_shapes_with_threads(signal, kernels, DetectionParams{}, 4);
    const auto many = find_shapes_with_threads(signal, kernels, DetectionParams{}, 64);
    CHECK(regions_to_json(one) == regions_to_json(four));
    CHECK(regions_to_json(one) == regions_to_json(many));
}

TEST_CASE("relaxing the thresholds only grows the detected runs") {
    const Kernel& base = lively_kernel(1.0);
    std::vector<Kernel> variants;
    for (int d = 1; d <= 10; ++d) {
        variants.push_back(base);
        variants.back().depth = d / 10.0;
    }
    std::mt19937_64 gen(mix_seed(4242));
    std::vector<double> ys(140);
    double level = 0.0;
    for (auto& y : ys) {
        level += uniform_real(gen, -1.0, 1.0);
        y = level;
    }
    const Signal signal = unit_signal(ys);

    DetectionParams strict;
    strict.max_mae = 0.02;
    strict.max_z = -2.5;
    DetectionParams loose;
    loose.max_mae = 0.06;
    loose.max_z = -1.0;

    const auto covered_strict = covered_indices(find_shapes(signal, variants, strict));
    const auto covered_loose = covered_indices(find_shapes(signal, variants, loose));
    CHECK(std::includes(covered_loose.begin(), covered_loose.end(), covered_strict.begin(),
                        covered_strict.end()));
}

TEST_CASE("display scaling of the signal leaves detections in place") {
    const auto& ds = testsupport::fixture_dataset();
    const auto all = build_kernels(ds);
    std::vector<Kernel> kernels(all.begin(), all.begin() + 70);

    std::mt19937_64 gen(mix_seed(77));
    std::vector<double> ys(150);
    double level = 0.0;
    for (auto& y : ys) {
        level += uniform_real(gen, -1.5, 1.5);
        y = level;
    }
    std::vector<double> scaled(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) scaled[i] = 3.7 * ys[i] + 11.0;

    const auto plain = find_shapes(unit_signal(ys), kernels, DetectionParams{});
    const auto shifted = find_shapes(unit_signal(scaled), kernels, DetectionParams{});
    REQUIRE(plain.size() == shifted.size());
    for (std::size_t i = 0; i < plain.size(); ++i) {
        CHECK(plain[i].start_index == shifted[i].start_index);
        CHECK(plain[i].end_index == shifted[i].end_index);
        CHECK(plain[i].cover_start == shifted[i].cover_start);
        CHECK(plain[i].cover_end == shifted[i].cover_end);
    }
}

TEST_CASE("parameter and size validation") {
    const Kernel& k = lively_kernel(1.0);
    const Signal signal = unit_signal(k.ys);

    CHECK_THROWS_AS(find_shapes(signal, {}, DetectionParams{}), NoKernelsError);

    DetectionParams bad_scale;
    bad_scale.window_scale = 0.0;
    CHECK_THROWS_AS(find_shapes(signal, {k}, bad_scale), DataError);

    DetectionParams bad_gap;
    bad_gap.merge_gap = -1;
    CHECK_THROWS_AS(find_shapes(signal, {k}, bad_gap), DataError);

    // All kernels longer than the signal: hard error. A mix: the long ones
    // are skipped and the short ones still run.
    const Signal tiny = unit_signal(std::vector<double>(20, 1.0));
    CHECK_THROWS_AS(find_shapes(tiny, {k}, DetectionParams{}), SignalTooShortError);

    Kernel shorter = k;
    shorter.ys.assign(k.ys.begin(), k.ys.begin() + 15);
    const Signal mid = unit_signal(std::vector<double>(20, 1.0));
    CHECK_NOTHROW(find_shapes(mid, {k, shorter}, DetectionParams{}));
}

TEST_CASE("window scale stretches the processed kernels") {
    const Kernel& k = lively_kernel(1.0);  // 31, 41 or 51 samples
    const Signal signal = unit_signal(std::vector<double>(120, 0.0));

    // Every base kernel spans at least 31 samples, so a 4x width scale wants
    // more points than this signal has and the lone kernel gets skipped.
    DetectionParams wide;
    wide.window_scale = 4.0;
    CHECK_THROWS_AS(find_shapes(signal, {k}, wide), SignalTooShortError);

    DetectionParams narrow;
    narrow.window_scale = 0.5;
    CHECK_NOTHROW(find_shapes(signal, {k}, narrow));
}

TEST_CASE("slope labelling picks the higher co-occurrence pair in window") {
    PairSlopeTable table;
    table[{"quick", "taking off"}] = PairSlope{2.7, 12};
    table[{"stagnant", "accelerating"}] = PairSlope{2.5, 1};

    // Rising piece with canvas slope 18.2/7 = 2.6, then a flat tail.
    const Signal signal(std::vector<double>{0.0, 1.0, 18.2}, std::vector<double>{0.0, 1.0, 1.0});
    const auto labels = label_slopes(signal, table, 0.1, 0.5);
    REQUIRE(labels.size() == 1);
    CHECK(labels[0].start_index == 0);
    CHECK(labels[0].end_index == 1);
    CHECK(labels[0].adjective == "quick");
    CHECK(labels[0].verb == "taking off");
    CHECK(labels[0].region_slope == doctest::Approx(2.6).epsilon(1e-12));
    CHECK(labels[0].pair_mean_slope == 2.7);
    CHECK(labels[0].co_count == 12);
}

TEST_CASE("slope window boundary is inclusive") {
    PairSlopeTable table;
    table[{"far", "pair"}] = PairSlope{2.0, 5};
    const Signal signal(std::vector<double>{0.0, 1.0, 8.0}, std::vector<double>{0.0, 1.0, 1.0});

    const auto wide = label_slopes(signal, table, 0.1, 1.0);
    REQUIRE(wide.size() == 1);
    const double diff = std::abs(2.0 - wide[0].region_slope);

    // Exactly at the window: still labeled. One ulp tighter: dropped.
    CHECK(label_slopes(signal, table, 0.1, diff).size() == 1);
    CHECK(label_slopes(signal, table, 0.1, std::nextafter(diff, 0.0)).empty());
}

TEST_CASE("slope label ties: co-occurrence count, then distance, then name") {
    const Signal signal(std::vector<double>{0.0, 1.0, 8.0}, std::vector<double>{0.0, 1.0, 1.0});
    SUBCASE("equal counts and distances fall back to the lexicographic pair") {
        PairSlopeTable table;
        table[{"b", "x"}] = PairSlope{0.3, 2};
        table[{"a", "y"}] = PairSlope{-0.3, 2};
        const auto labels = label_slopes(signal, table, 0.1, 0.5);
        REQUIRE(labels.size() == 1);  // only the flat tail piece is in window
        CHECK(labels[0].start_index == 1);
        CHECK(labels[0].end_index == 2);
        CHECK(labels[0].adjective == "a");
        CHECK(labels[0].verb == "y");
        CHECK(labels[0].region_slope == 0.0);
    }
    SUBCASE("a higher count wins even at a worse distance") {
        PairSlopeTable table;
        table[{"close", "verb"}] = PairSlope{0.05, 1};
        table[{"common", "verb"}] = PairSlope{0.4, 9};
        const auto labels = label_slopes(signal, table, 0.1, 0.5);
        REQUIRE(labels.size() == 1);
        CHECK(labels[0].adjective == "common");
        CHECK(labels[0].co_count == 9);
    }
    SUBCASE("equal counts prefer the closer mean") {
        PairSlopeTable table;
        table[{"z", "far"}] = PairSlope{0.45, 3};
        table[{"a", "near"}] = PairSlope{0.1, 3};
        const auto labels = label_slopes(signal, table, 0.1, 0.5);
        REQUIRE(labels.size() == 1);
        CHECK(labels[0].adjective == "a");
        CHECK(labels[0].verb == "near");
    }
}

TEST_CASE("coarse epsilon collapses the signal to a single labeled piece") {
    PairSlopeTable table;
    table[{"steady", "rising"}] = PairSlope{1.0, 4};
    const Signal signal(std::vector<double>{0.0, 1.0, 2.0, 3.0},
                        std::vector<double>{0.0, 0.2, 0.9, 1.0});
    const auto labels = label_slopes(signal, table, 10.0, 1.0);
    REQUIRE(labels.size() == 1);
    CHECK(labels[0].start_index == 0);
    CHECK(labels[0].end_index == 3);
    // Full-span piece: slope = 1 normalized unit over 7 segment widths.
    CHECK(labels[0].region_slope == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("labelling refuses an empty pair table") {
    const Signal signal(std::vector<double>{0.0, 1.0}, std::vector<double>{0.0, 1.0});
    CHECK_THROWS_AS(label_slopes(signal, PairSlopeTable{}, 0.1, 0.5), EmptyTableError);
}

TEST_CASE("regions survive the json round trip") {
    const Kernel& k = lively_kernel(1.0);
    const auto regions = find_shapes(unit_signal(k.ys), {k}, DetectionParams{});
    REQUIRE_FALSE(regions.empty());
    const auto j = regions_to_json(regions);
    CHECK(regions_to_json(regions_from_json(j)) == j);

    SUBCASE("missing cover fields default to the run bounds") {
        const auto sparse = nlohmann::json::array(
            {{{"start_index", 3}, {"end_index", 5},
              {"words", nlohmann::json::array({{{"word", "w"}}})}}});
        const auto parsed = regions_from_json(sparse);
        REQUIRE(parsed.size() == 1);
        CHECK(parsed[0].cover_start == 3);
        CHECK(parsed[0].cover_end == 5);
        REQUIRE(parsed[0].words.size() == 1);
        CHECK(parsed[0].words[0].votes == 1);
    }
    SUBCASE("regions without words are rejected") {
        const auto bad = nlohmann::json::array(
            {{{"start_index", 0}, {"end_index", 1}, {"words", nlohmann::json::array()}}});
        CHECK_THROWS_AS(regions_from_json(bad), DataError);
        CHECK_THROWS_AS(regions_from_json(nlohmann::json::array({{{"start_index", 0}}})),
                        DataError);
    }
}

TEST_CASE("labels survive the json round trip") {
    PairSlopeTable table;
    table[{"quick", "taking off"}] = PairSlope{2.7, 12};
    const Signal signal(std::vector<double>{1960.0, 1990.0, 2030.0},
                        std::vector<double>{0.0, 10.0, 10.0});
    const auto labels = label_slopes(signal, table, 0.01, 10.0);
    REQUIRE_FALSE(labels.empty());
    const auto j = labels_to_json(labels, signal);
    CHECK(j[0].at("x_start").get<double>() == 1960.0);

    const auto back = labels_from_json(j);
    REQUIRE(back.size() == labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        CHECK(back[i].start_index == labels[i].start_index);
        CHECK(back[i].end_index == labels[i].end_index);
        CHECK(back[i].adjective == labels[i].adjective);
        CHECK(back[i].verb == labels[i].verb);
        CHECK(back[i].region_slope == labels[i].region_slope);
        CHECK(back[i].pair_mean_slope == labels[i].pair_mean_slope);
        CHECK(back[i].co_count == labels[i].co_count);
    }
    SUBCASE("score fields are optional on input") {
        const auto sparse = nlohmann::json::array({{{"start_index", 0},
                                                    {"end_index", 2},
                                                    {"adjective", "a"},
                                                    {"verb", "b"}}});
        const auto parsed = labels_from_json(sparse);
        REQUIRE(parsed.size() == 1);
        CHECK(parsed[0].co_count == 1);
        CHECK(parsed[0].region_slope == 0.0);
    }
}

}  // TEST_SUITE
