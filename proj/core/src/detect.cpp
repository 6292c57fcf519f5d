#include "molehill/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "molehill/errors.hpp"

namespace molehill {

namespace {

// Detection works in the sample-index domain: both kernel and signal are
// rebased onto unit x spacing so derivative magnitudes are comparable no
// matter what units the source xs carry.
Signal unit_spaced(std::vector<double> ys) {
    std::vector<double> xs(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
    return Signal(std::move(xs), std::move(ys));
}

std::size_t scaled_length(std::size_t base, double window_scale) {
    return static_cast<std::size_t>(
        std::max<long>(5, std::lround(window_scale * static_cast<double>(base))));
}

// One kernel variant through the pipeline: width-scale, normalize, scale the
// normalized height to the variant depth, smooth, differentiate.
Signal processed_kernel(const Kernel& k, double window_scale) {
    Signal base = unit_spaced(k.ys);
    const std::size_t want = scaled_length(base.size(), window_scale);
    if (want != base.size()) base = unit_spaced(resample(base, want).ys);
    Signal norm = normalize(base);
    for (double& y : norm.ys) y *= k.depth;
    const int w = savgol_window_for(norm.size());
    return first_derivative(savgol(norm, w, 2), w, 2);
}

struct KernelHits {
    std::vector<int> offsets;  // qualifying window starts
    std::vector<double> mae;
    std::vector<double> z;
    int length = 0;  // processed kernel length
};

}  // namespace

std::vector<Kernel> build_kernels(const AnnotationDataset& ds) {
    if (ds.empty()) throw EmptyDatasetError();
    std::vector<Kernel> kernels;
    for (const auto& [key, indices] : ds.by_segment) {
        const Chart& chart = ds.charts.at(key.chart_id);
        std::set<std::string> words;
        for (std::size_t i : indices) words.insert(ds.records[i].word);

        const int lo_seg = std::max(0, key.segment_index - 2);
        const int hi_seg = std::min(kSegmentsPerChart - 1, key.segment_index + 2);
        const auto unscaled = chart.unscaled_ys();
        const auto lo = static_cast<std::size_t>(lo_seg) * kSamplesPerSegment;
        const auto hi = static_cast<std::size_t>(hi_seg) * kSamplesPerSegment + kSamplesPerSegment;

        Kernel base;
        base.words.assign(words.begin(), words.end());
        base.source = key;
        base.segments_covered = hi_seg - lo_seg + 1;
        base.ys.assign(unscaled.begin() + static_cast<std::ptrdiff_t>(lo),
                       unscaled.begin() + static_cast<std::ptrdiff_t>(hi) + 1);
        for (int k = 1; k <= 10; ++k) {
            kernels.push_back(base);
            kernels.back().depth = k / 10.0;
        }
    }
    return kernels;
}

std::vector<std::pair<int, int>> merge_qualifying_points(const std::vector<int>& points,
                                                         int merge_gap) {
    std::vector<int> pts = points;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<std::pair<int, int>> runs;
    for (int p : pts) {
        if (!runs.empty() && p - runs.back().second <= merge_gap)
            runs.back().second = p;
        else
            runs.emplace_back(p, p);
    }
    return runs;
}

std::vector<LabeledRegion> find_shapes(const Signal& signal, const std::vector<Kernel>& kernels,
                                       const DetectionParams& params) {
    unsigned hw = std::thread::hardware_concurrency();
    return find_shapes_with_threads(signal, kernels, params, hw == 0 ? 1 : hw);
}

std::vector<LabeledRegion> find_shapes_with_threads(const Signal& signal,
                                                    const std::vector<Kernel>& kernels,
                                                    const DetectionParams& params,
                                                    unsigned threads) {
    signal.validate();
    if (kernels.empty()) throw NoKernelsError();
    if (params.window_scale <= 0.0) throw DataError("window_scale must be positive");
    if (params.merge_gap < 0) throw DataError("merge_gap must be >= 0");

    const Signal norm_sig = normalize(unit_spaced(signal.ys));

    // Smoothing windows follow the processed kernel lengths; derive the set up
    // front so the per-window signal derivatives are shared, read-only state.
    std::set<int> windows;
    std::size_t usable = 0;
    for (const Kernel& k : kernels) {
        const std::size_t len = scaled_length(k.ys.size(), params.window_scale);
        if (len > norm_sig.size()) continue;
        windows.insert(savgol_window_for(len));
        ++usable;
    }
    if (usable == 0)
        throw SignalTooShortError(std::to_string(norm_sig.size()) +
                                  " points is below every processed kernel length");

    std::map<int, Signal> sig_deriv;
    for (int w : windows) sig_deriv.emplace(w, first_derivative(savgol(norm_sig, w, 2), w, 2));

    std::vector<KernelHits> hits(kernels.size());
    const auto nthreads = static_cast<unsigned>(
        std::clamp<std::size_t>(threads, 1, kernels.size()));
    auto worker = [&](unsigned first) {
        for (std::size_t i = first; i < kernels.size(); i += nthreads) {
            if (scaled_length(kernels[i].ys.size(), params.window_scale) > norm_sig.size())
                continue;
            const Signal kd = processed_kernel(kernels[i], params.window_scale);
            const ErrorTrace trace = windowed_mae(kd, sig_deriv.at(savgol_window_for(kd.size())));
            KernelHits h;
            h.length = static_cast<int>(kd.size());
            for (std::size_t o = 0; o < trace.mae.size(); ++o) {
                if (trace.mae[o] <= params.max_mae || trace.z[o] <= params.max_z) {
                    h.offsets.push_back(static_cast<int>(o));
                    h.mae.push_back(trace.mae[o]);
                    h.z.push_back(trace.z[o]);
                }
            }
            hits[i] = std::move(h);
        }
    };
    if (nthreads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }

    std::vector<int> points;
    for (const KernelHits& h : hits) points.insert(points.end(), h.offsets.begin(), h.offsets.end());
    const auto runs = merge_qualifying_points(points, params.merge_gap);

    std::vector<LabeledRegion> regions(runs.size());
    std::vector<std::map<std::string, int>> votes(runs.size());
    std::vector<int> starts(runs.size());
    for (std::size_t r = 0; r < runs.size(); ++r) {
        regions[r].start_index = runs[r].first;
        regions[r].end_index = runs[r].second;
        regions[r].cover_start = std::numeric_limits<int>::max();
        regions[r].cover_end = -1;
        regions[r].best_mae = std::numeric_limits<double>::infinity();
        regions[r].best_z = std::numeric_limits<double>::infinity();
        starts[r] = runs[r].first;
    }

    for (std::size_t i = 0; i < kernels.size(); ++i) {
        const KernelHits& h = hits[i];
        for (std::size_t j = 0; j < h.offsets.size(); ++j) {
            const int o = h.offsets[j];
            const auto it = std::upper_bound(starts.begin(), starts.end(), o);
            const auto r = static_cast<std::size_t>(it - starts.begin()) - 1;
            LabeledRegion& reg = regions[r];
            reg.cover_start = std::min(reg.cover_start, o);
            reg.cover_end = std::max(reg.cover_end, o + h.length - 1);
            reg.best_mae = std::min(reg.best_mae, h.mae[j]);
            reg.best_z = std::min(reg.best_z, h.z[j]);
            for (const std::string& word : kernels[i].words) ++votes[r][word];
        }
    }

    for (std::size_t r = 0; r < regions.size(); ++r) {
        LabeledRegion& reg = regions[r];
        reg.words.reserve(votes[r].size());
        for (const auto& [word, n] : votes[r]) reg.words.push_back(WordVote{word, n});
        std::sort(reg.words.begin(), reg.words.end(), [](const WordVote& a, const WordVote& b) {
            return a.votes != b.votes ? a.votes > b.votes : a.word < b.word;
        });
        reg.x_start = signal.xs[static_cast<std::size_t>(reg.cover_start)];
        reg.x_end = signal.xs[static_cast<std::size_t>(reg.cover_end)];
    }
    return regions;
}

std::vector<SlopeLabel> label_slopes(const Signal& signal, const PairSlopeTable& table,
                                     double epsilon, double slope_window) {
    signal.validate();
    if (table.empty()) throw EmptyTableError();

    const Signal norm = normalize(signal);
    const auto keep = rdp_indices(norm, epsilon);
    const double span = norm.xs.back() - norm.xs.front();

    std::vector<SlopeLabel> out;
    for (std::size_t p = 0; p + 1 < keep.size(); ++p) {
        const std::size_t i0 = keep[p];
        const std::size_t i1 = keep[p + 1];
        // Slope on the generator's canvas: seven segment-widths across, one
        // unit high, so one normalized y-unit per segment-width is slope 1.
        const double dx = (norm.xs[i1] - norm.xs[i0]) / span * kSegmentsPerChart;
        const double slope = (norm.ys[i1] - norm.ys[i0]) / dx;

        const PairSlopeTable::value_type* best = nullptr;
        for (const auto& entry : table) {
            const double diff = std::abs(entry.second.mean_slope - slope);
            if (diff > slope_window) continue;
            if (!best) {
                best = &entry;
                continue;
            }
            const double best_diff = std::abs(best->second.mean_slope - slope);
            if (entry.second.co_count != best->second.co_count) {
                if (entry.second.co_count > best->second.co_count) best = &entry;
            } else if (diff != best_diff) {
                if (diff < best_diff) best = &entry;
            } else if (entry.first < best->first) {
                best = &entry;
            }
        }
        if (!best) continue;
        SlopeLabel label;
        label.start_index = static_cast<int>(i0);
        label.end_index = static_cast<int>(i1);
        label.adjective = best->first.first;
        label.verb = best->first.second;
        label.region_slope = slope;
        label.pair_mean_slope = best->second.mean_slope;
        label.co_count = best->second.co_count;
        out.push_back(std::move(label));
    }
    return out;
}

nlohmann::json regions_to_json(const std::vector<LabeledRegion>& regions) {
    auto arr = nlohmann::json::array();
    for (const LabeledRegion& r : regions) {
        auto words = nlohmann::json::array();
        for (const WordVote& wv : r.words) words.push_back({{"word", wv.word}, {"votes", wv.votes}});
        arr.push_back({{"start_index", r.start_index},
                       {"end_index", r.end_index},
                       {"cover_start", r.cover_start},
                       {"cover_end", r.cover_end},
                       {"x_start", r.x_start},
                       {"x_end", r.x_end},
                       {"best_mae", r.best_mae},
                       {"best_z", r.best_z},
                       {"words", words}});
    }
    return arr;
}

std::vector<LabeledRegion> regions_from_json(const nlohmann::json& j) {
    std::vector<LabeledRegion> regions;
    try {
        for (const auto& row : j) {
            LabeledRegion r;
            r.start_index = row.at("start_index").get<int>();
            r.end_index = row.at("end_index").get<int>();
            r.cover_start = row.value("cover_start", r.start_index);
            r.cover_end = row.value("cover_end", r.end_index);
            r.x_start = row.value("x_start", 0.0);
            r.x_end = row.value("x_end", 0.0);
            r.best_mae = row.value("best_mae", 0.0);
            r.best_z = row.value("best_z", 0.0);
            for (const auto& w : row.at("words"))
                r.words.push_back(WordVote{w.at("word").get<std::string>(), w.value("votes", 1)});
            if (r.words.empty()) throw DataError("region without words");
            regions.push_back(std::move(r));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid regions json: ") + e.what());
    }
    return regions;
}

nlohmann::json labels_to_json(const std::vector<SlopeLabel>& labels, const Signal& signal) {
    auto arr = nlohmann::json::array();
    for (const SlopeLabel& l : labels) {
        arr.push_back({{"start_index", l.start_index},
                       {"end_index", l.end_index},
                       {"x_start", signal.xs[static_cast<std::size_t>(l.start_index)]},
                       {"x_end", signal.xs[static_cast<std::size_t>(l.end_index)]},
                       {"adjective", l.adjective},
                       {"verb", l.verb},
                       {"region_slope", l.region_slope},
                       {"pair_mean_slope", l.pair_mean_slope},
                       {"co_count", l.co_count}});
    }
    return arr;
}

std::vector<SlopeLabel> labels_from_json(const nlohmann::json& j) {
    std::vector<SlopeLabel> labels;
    try {
        for (const auto& row : j) {
            SlopeLabel l;
            l.start_index = row.at("start_index").get<int>();
            l.end_index = row.at("end_index").get<int>();
            l.adjective = row.at("adjective").get<std::string>();
            l.verb = row.at("verb").get<std::string>();
            l.region_slope = row.value("region_slope", 0.0);
            l.pair_mean_slope = row.value("pair_mean_slope", 0.0);
            l.co_count = row.value("co_count", 1);
            labels.push_back(std::move(l));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid labels json: ") + e.what());
    }
    return labels;
}

}  // namespace molehill
