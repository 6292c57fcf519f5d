#include "molehill/render.hpp"

#include <algorithm>
#include <cstdio>

#include "molehill/errors.hpp"

namespace molehill {

namespace {

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string xml_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Viewport {
    double x0, x_span, y_min, y_span;  // data ranges
    double px0, px_span, py0, py_span;  // pixel ranges (py grows downward)

    double map_x(double x) const { return px0 + (x - x0) / x_span * px_span; }
    double map_y(double y) const {
        if (y_span == 0.0) return py0 + py_span / 2.0;
        return py0 + py_span - (y - y_min) / y_span * py_span;
    }
};

}  // namespace

std::string render_svg(const Signal& signal, const std::vector<LabeledRegion>& regions,
                       const std::vector<SlopeLabel>& labels, const RenderSpec& spec) {
    signal.validate();
    if (spec.width <= 2.0 * spec.margin || spec.height <= 2.0 * spec.margin)
        throw SpecTooSmallError(fmt2(spec.width) + "x" + fmt2(spec.height) + " with margin " +
                                fmt2(spec.margin));

    Viewport vp;
    vp.x0 = signal.xs.front();
    vp.x_span = signal.xs.back() - vp.x0;
    const auto [mn, mx] = std::minmax_element(signal.ys.begin(), signal.ys.end());
    vp.y_min = *mn;
    vp.y_span = *mx - *mn;
    vp.px0 = spec.margin;
    vp.px_span = spec.width - 2.0 * spec.margin;
    vp.py0 = spec.margin;
    vp.py_span = spec.height - 2.0 * spec.margin;

    auto index_x = [&](int i) {
        const auto idx = static_cast<std::size_t>(std::clamp<int>(
            i, 0, static_cast<int>(signal.size()) - 1));
        return vp.map_x(signal.xs[idx]);
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(spec.width) +
           "\" height=\"" + fmt2(spec.height) + "\" viewBox=\"0 0 " + fmt2(spec.width) + " " +
           fmt2(spec.height) + "\">\n";

    if (spec.show_regions) {
        for (const LabeledRegion& r : regions) {
            // Shade the matched extent when present, else the offset run.
            const bool has_cover = r.cover_end > r.cover_start;
            const double left = index_x(has_cover ? r.cover_start : r.start_index);
            const double right = index_x(has_cover ? r.cover_end : r.end_index);
            svg += "  <rect x=\"" + fmt2(left) + "\" y=\"" + fmt2(vp.py0) + "\" width=\"" +
                   fmt2(right - left) + "\" height=\"" + fmt2(vp.py_span) +
                   "\" fill=\"#4c78a8\" fill-opacity=\"0.2\"/>\n";
            if (!r.words.empty()) {
                svg += "  <text x=\"" + fmt2((left + right) / 2.0) + "\" y=\"" +
                       fmt2(vp.py0 - 4.0) +
                       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">" +
                       xml_escape(r.words.front().word) + "</text>\n";
            }
        }
    }

    std::string d;
    for (std::size_t i = 0; i < signal.size(); ++i) {
        d += i == 0 ? "M" : " L";
        d += fmt2(vp.map_x(signal.xs[i])) + " " + fmt2(vp.map_y(signal.ys[i]));
    }
    svg += "  <path d=\"" + d + "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";

    if (spec.show_labels) {
        for (const SlopeLabel& l : labels) {
            const double mid_x = (index_x(l.start_index) + index_x(l.end_index)) / 2.0;
            const auto mid_i = static_cast<std::size_t>((l.start_index + l.end_index) / 2);
            const double mid_y = vp.map_y(signal.ys[std::min(mid_i, signal.size() - 1)]) - 6.0;
            svg += "  <text x=\"" + fmt2(mid_x) + "\" y=\"" + fmt2(mid_y) +
                   "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" "
                   "font-style=\"italic\">" +
                   xml_escape(l.adjective + " " + l.verb) + "</text>\n";
        }
    }

    svg += "</svg>\n";
    return svg;
}

}  // namespace molehill
