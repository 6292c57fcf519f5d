#pragma once

// Shape discovery: slide annotated kernel signals (and their depth/width
// variants) past an unlabeled signal in the smoothed-derivative domain, keep
// offsets under the MAE/z thresholds, and merge them into labeled regions.
// Also the RDP slope-labeling protocol driven by the adjective-verb table.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "molehill/dataset.hpp"
#include "molehill/semantics.hpp"
#include "molehill/sigproc.hpp"

namespace molehill {

struct Kernel {
    std::vector<std::string> words;  // every word annotated on the source segment
    SegmentKey source;
    int segments_covered = 0;  // 1..5 (center plus up to two per side)
    std::vector<double> ys;    // unscaled chart samples, unit x spacing
    double depth = 1.0;        // normalized variant height, in {0.1,...,1.0}
};

struct DetectionParams {
    double window_scale = 1.0;  // kernel resampled to round(scale * length)
    double max_mae = 0.05;      // normalized-derivative units
    double max_z = -1.5;
    int merge_gap = 2;
};

struct WordVote {
    std::string word;
    int votes = 0;  // qualifying points that carried this word
};

struct LabeledRegion {
    int start_index = 0;  // merged run of qualifying window-start offsets
    int end_index = 0;    // inclusive
    int cover_start = 0;  // union of the qualifying windows themselves
    int cover_end = 0;    // inclusive
    double x_start = 0.0;  // signal x at the cover bounds
    double x_end = 0.0;
    std::vector<WordVote> words;  // ranked by votes desc, then word
    double best_mae = 0.0;
    double best_z = 0.0;
};

struct SlopeLabel {
    int start_index = 0;  // RDP piece, inclusive signal indices
    int end_index = 0;
    std::string adjective;
    std::string verb;
    double region_slope = 0.0;
    double pair_mean_slope = 0.0;
    int co_count = 0;
};

// One base kernel per annotated segment (center segment plus up to two
// segments on each side, fewer at chart edges), times ten depth variants.
// Ordered by (chart id, segment, depth).
std::vector<Kernel> build_kernels(const AnnotationDataset& ds);

// Merge ascending qualifying points whose gaps are <= merge_gap into
// inclusive [start, end] runs.
std::vector<std::pair<int, int>> merge_qualifying_points(const std::vector<int>& points,
                                                         int merge_gap);

std::vector<LabeledRegion> find_shapes(const Signal& signal, const std::vector<Kernel>& kernels,
                                       const DetectionParams& params);

// Identical results for any thread count; map per kernel, reduce in order.
std::vector<LabeledRegion> find_shapes_with_threads(const Signal& signal,
                                                    const std::vector<Kernel>& kernels,
                                                    const DetectionParams& params,
                                                    unsigned threads);

// RDP-decompose the normalized signal and label each linear piece with the
// in-window pair of max co-occurrence. Slopes are measured on a canvas seven
// segment-widths across and one unit high (the generator's aspect ratio).
std::vector<SlopeLabel> label_slopes(const Signal& signal, const PairSlopeTable& table,
                                     double epsilon, double slope_window = 0.5);

nlohmann::json regions_to_json(const std::vector<LabeledRegion>& regions);
std::vector<LabeledRegion> regions_from_json(const nlohmann::json& j);
nlohmann::json labels_to_json(const std::vector<SlopeLabel>& labels, const Signal& signal);
std::vector<SlopeLabel> labels_from_json(const nlohmann::json& j);

}  // namespace molehill
