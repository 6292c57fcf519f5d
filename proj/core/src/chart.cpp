#include "molehill/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "molehill/errors.hpp"
#include "molehill/rng.hpp"

namespace molehill {

namespace {

constexpr std::array<const char*, kSlopeClassCount> kClassNames = {
    "Up", "Down", "Flat", "SteepUp", "SteepDown", "SteepFlat",
    "GentleUp", "GentleDown", "GentleFlat"};

constexpr std::array<double, kSlopeClassCount> kClassSlopes = {
    1.0, -1.0, 0.0, 3.0, -3.0, 0.0, 0.5, -0.5, 0.0};

// Legend subjects with display transforms that keep the curve plausible for the
// label. The transform is cosmetic; analysis always works on unscaled values.
struct SubjectEntry {
    const char* name;
    AxisStyle style;
};

constexpr std::array<SubjectEntry, 10> kSubjects = {{
    {"Consumer Debt", {12.0, 900.0}},
    {"Median Household Income", {180.0, 42000.0}},
    {"Energy Prices", {0.6, 75.0}},
    {"Rail Freight Volume", {4.5, 1200.0}},
    {"Urban Population", {25.0, 6500.0}},
    {"Broadband Subscriptions", {1.8, 220.0}},
    {"Wheat Exports", {3.2, 480.0}},
    {"Hospital Admissions", {7.5, 1800.0}},
    {"Air Passenger Miles", {40.0, 9000.0}},
    {"Steel Production", {2.4, 350.0}},
}};

int sign_of(double v) { return v > 0.0 ? 1 : v < 0.0 ? -1 : 0; }

std::string hex_id(std::uint64_t value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "chart-%016llx", static_cast<unsigned long long>(value));
    return buf;
}

}  // namespace

double slope_value(SlopeClass c) { return kClassSlopes[static_cast<int>(c)]; }

const char* slope_class_name(SlopeClass c) { return kClassNames[static_cast<int>(c)]; }

SlopeClass slope_class_from_name(const std::string& name) {
    for (int i = 0; i < kSlopeClassCount; ++i)
        if (name == kClassNames[i]) return static_cast<SlopeClass>(i);
    throw DataError("unknown slope class: " + name);
}

std::vector<double> Chart::unscaled_ys() const {
    std::vector<double> out(ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) out[i] = (ys[i] - y_offset) / y_scale;
    return out;
}

Signal Chart::unscaled_signal() const { return Signal(xs, unscaled_ys()); }

void Chart::validate() const {
    if (id.empty()) throw DataError("chart id is empty");
    if (subject.empty()) throw DataError("chart subject is empty");
    if (y_scale <= 0.0) throw DataError("chart y_scale must be positive: " + id);
    if (xs.size() != kPointsPerChart || ys.size() != kPointsPerChart)
        throw DataError("chart " + id + " must have exactly " +
                        std::to_string(kPointsPerChart) + " points");
    if (xs.front() != kChartXMin || xs.back() != kChartXMax)
        throw DataError("chart " + id + " x-range must span 1960-2030");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] <= xs[i - 1])
            throw DataError("chart " + id + " xs not strictly increasing");

    const auto u = unscaled_ys();
    if (std::abs(u[0]) > 1e-9)
        throw DataError("chart " + id + " must start at unscaled y = 0");
    for (int k = 0; k < kSegmentsPerChart; ++k) {
        const double slope = slope_value(segments[k]);
        for (int j = 0; j < kSamplesPerSegment; ++j) {
            const std::size_t i = static_cast<std::size_t>(k) * kSamplesPerSegment + j;
            const double dx = xs[i + 1] - xs[i];
            if (std::abs((u[i + 1] - u[i]) - slope * dx) > 1e-6)
                throw DataError("chart " + id + " is not piecewise-linear at point " +
                                std::to_string(i + 1));
        }
    }
}

Chart chart_from_segments(const std::array<SlopeClass, kSegmentsPerChart>& segments,
                          const std::string& id, const std::string& subject,
                          double y_scale, double y_offset) {
    Chart chart;
    chart.id = id;
    chart.subject = subject;
    chart.segments = segments;
    chart.y_scale = y_scale;
    chart.y_offset = y_offset;
    chart.xs.resize(kPointsPerChart);
    chart.ys.resize(kPointsPerChart);
    double y = 0.0;
    chart.xs[0] = kChartXMin;
    chart.ys[0] = y * y_scale + y_offset;
    std::size_t i = 1;
    for (int k = 0; k < kSegmentsPerChart; ++k) {
        const double slope = slope_value(segments[k]);
        for (int j = 0; j < kSamplesPerSegment; ++j, ++i) {
            const double x = kChartXMin + static_cast<double>(i);
            y += slope;  // x step is exactly 1 year
            chart.xs[i] = x;
            chart.ys[i] = y * y_scale + y_offset;
        }
    }
    chart.validate();
    return chart;
}

Chart generate_chart(std::uint64_t seed, const std::string& subject) {
    if (subject.empty()) throw DataError("chart subject is empty");
    std::mt19937_64 rng(seed);
    std::array<SlopeClass, kSegmentsPerChart> segs{};
    for (auto& s : segs) s = static_cast<SlopeClass>(bounded_uniform(rng, kSlopeClassCount));
    const AxisStyle style = subject_axis_style(subject);
    return chart_from_segments(segs, hex_id(mix_seed(seed)), subject, style.scale,
                               style.offset);
}

std::vector<Chart> generate_batch(std::uint64_t seed, int count) {
    if (count < 1) throw DataError("batch count must be >= 1");
    std::mt19937_64 picker(mix_seed(seed));
    std::vector<Chart> charts;
    charts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const auto& subject =
            chart_subjects()[bounded_uniform(picker, chart_subjects().size())];
        const std::uint64_t sub_seed = mix_seed(seed ^ static_cast<std::uint64_t>(i + 1));
        Chart chart = generate_chart(sub_seed, subject);
        char buf[32];
        std::snprintf(buf, sizeof buf, "chart-%03d", i + 1);
        chart.id = buf;
        charts.push_back(std::move(chart));
    }
    return charts;
}

ChartMetrics chart_metrics(const Chart& chart) {
    chart.validate();
    ChartMetrics m;
    const auto u = chart.unscaled_ys();
    m.net_slope = (u.back() - u.front()) / (chart.x_max() - chart.x_min());
    int up = 0, flat = 0, down = 0;
    for (auto c : chart.segments) {
        const int s = sign_of(slope_value(c));
        if (s > 0) ++up;
        else if (s < 0) ++down;
        else ++flat;
    }
    m.pct_up = up / static_cast<double>(kSegmentsPerChart);
    m.pct_flat = flat / static_cast<double>(kSegmentsPerChart);
    m.pct_down = down / static_cast<double>(kSegmentsPerChart);
    for (int k = 0; k + 1 < kSegmentsPerChart; ++k)
        if (sign_of(slope_value(chart.segments[k])) !=
            sign_of(slope_value(chart.segments[k + 1])))
            ++m.inflection_count;
    return m;
}

const std::vector<std::string>& chart_subjects() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& e : kSubjects) v.emplace_back(e.name);
        return v;
    }();
    return names;
}

AxisStyle subject_axis_style(const std::string& subject) {
    for (const auto& e : kSubjects)
        if (subject == e.name) return e.style;
    return AxisStyle{};
}

nlohmann::json chart_to_json(const Chart& chart) {
    nlohmann::json j;
    j["id"] = chart.id;
    j["subject"] = chart.subject;
    auto& segs = j["segments"] = nlohmann::json::array();
    for (auto c : chart.segments) segs.push_back(slope_class_name(c));
    auto& pts = j["points"] = nlohmann::json::array();
    for (std::size_t i = 0; i < chart.xs.size(); ++i)
        pts.push_back(nlohmann::json::array({chart.xs[i], chart.ys[i]}));
    j["y_scale"] = chart.y_scale;
    j["y_offset"] = chart.y_offset;
    return j;
}

Chart chart_from_json(const nlohmann::json& j) {
    Chart chart;
    try {
        chart.id = j.at("id").get<std::string>();
        chart.subject = j.at("subject").get<std::string>();
        const auto& segs = j.at("segments");
        if (segs.size() != kSegmentsPerChart)
            throw DataError("chart " + chart.id + " needs exactly 7 segments");
        for (std::size_t k = 0; k < segs.size(); ++k)
            chart.segments[k] = slope_class_from_name(segs[k].get<std::string>());
        for (const auto& p : j.at("points")) {
            chart.xs.push_back(p.at(0).get<double>());
            chart.ys.push_back(p.at(1).get<double>());
        }
        chart.y_scale = j.at("y_scale").get<double>();
        chart.y_offset = j.at("y_offset").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid chart json: ") + e.what());
    }
    chart.validate();
    return chart;
}

nlohmann::json charts_to_json(const std::vector<Chart>& charts) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : charts) j.push_back(chart_to_json(c));
    return j;
}

std::vector<Chart> charts_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw DataError("charts file must be a JSON array");
    std::vector<Chart> charts;
    charts.reserve(j.size());
    for (const auto& item : j) charts.push_back(chart_from_json(item));
    return charts;
}

std::vector<Chart> load_charts(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open charts file: " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid charts json in " + file.string() + ": " + e.what());
    }
    return charts_from_json(j);
}

void save_charts(const std::vector<Chart>& charts, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw DataError("cannot write charts file: " + file.string());
    out << charts_to_json(charts).dump(2) << '\n';
}

}  // namespace molehill
