#pragma once

// Deterministic SVG output: the signal as a polyline plus shaded region
// overlays and slope-label text.

#include <string>
#include <vector>

#include "molehill/detect.hpp"
#include "molehill/sigproc.hpp"

namespace molehill {

struct RenderSpec {
    double width = 800.0;   // pixels
    double height = 300.0;  // pixels
    double margin = 30.0;
    bool show_regions = true;
    bool show_labels = true;
};

// Identical inputs produce identical bytes: fixed 2-decimal coordinates, no
// font metrics (text is anchored, never measured).
std::string render_svg(const Signal& signal, const std::vector<LabeledRegion>& regions,
                       const std::vector<SlopeLabel>& labels, const RenderSpec& spec);

}  // namespace molehill
