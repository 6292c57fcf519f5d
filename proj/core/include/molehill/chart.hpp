#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "molehill/sigproc.hpp"

namespace molehill {

/// The nine segment slope classes used by the chart generator.
enum class SlopeClass {
    Up,
    Down,
    Flat,
    SteepUp,
    SteepDown,
    SteepFlat,
    GentleUp,
    GentleDown,
    GentleFlat,
};

inline constexpr int kSlopeClassCount = 9;
inline constexpr int kSegmentsPerChart = 7;
inline constexpr int kSamplesPerSegment = 10;
inline constexpr int kPointsPerChart = kSegmentsPerChart * kSamplesPerSegment + 1;
inline constexpr double kChartXMin = 1960.0;
inline constexpr double kChartXMax = 2030.0;
inline constexpr double kSegmentWidth = (kChartXMax - kChartXMin) / kSegmentsPerChart;

/// Slope in y-units per x-unit: Up/Down/Flat = {1,-1,0}, Steep* = {3,-3,0},
/// Gentle* = {0.5,-0.5,0}.
double slope_value(SlopeClass c);
const char* slope_class_name(SlopeClass c);
SlopeClass slope_class_from_name(const std::string& name);

/// A synthetic 7-segment piecewise-linear stimulus chart. `ys` holds the display
/// values (after y_scale/y_offset); analysis code works on unscaled_ys().
struct Chart {
    std::string id;
    std::string subject;
    std::array<SlopeClass, kSegmentsPerChart> segments{};
    std::vector<double> xs;
    std::vector<double> ys;
    double y_scale = 1.0;
    double y_offset = 0.0;

    double x_min() const { return xs.front(); }
    double x_max() const { return xs.back(); }

    /// Display values mapped back to generator units: (y - y_offset) / y_scale.
    std::vector<double> unscaled_ys() const;
    Signal unscaled_signal() const;

    /// Throws DataError if any Chart invariant is violated.
    void validate() const;
};

struct ChartMetrics {
    double net_slope = 0.0;
    double pct_up = 0.0;
    double pct_flat = 0.0;
    double pct_down = 0.0;
    int inflection_count = 0;
};

/// Deterministic chart from a seed: 7 uniformly drawn slope classes, 71 points
/// on the 1960-2030 grid starting at unscaled y = 0, then the subject's display
/// scale/offset applied.
Chart generate_chart(std::uint64_t seed, const std::string& subject);

/// Chart with the given segment classes instead of random ones.
Chart chart_from_segments(const std::array<SlopeClass, kSegmentsPerChart>& segments,
                          const std::string& id, const std::string& subject,
                          double y_scale = 1.0, double y_offset = 0.0);

/// `count` charts with ids chart-001..chart-NNN, per-chart sub-seeds derived
/// from `seed`, and randomly assigned legend subjects.
std::vector<Chart> generate_batch(std::uint64_t seed, int count);

ChartMetrics chart_metrics(const Chart& chart);

/// Built-in legend subjects and their cosmetic display transforms.
const std::vector<std::string>& chart_subjects();
struct AxisStyle {
    double scale = 1.0;
    double offset = 0.0;
};
AxisStyle subject_axis_style(const std::string& subject);

nlohmann::json chart_to_json(const Chart& chart);
Chart chart_from_json(const nlohmann::json& j);
nlohmann::json charts_to_json(const std::vector<Chart>& charts);
std::vector<Chart> charts_from_json(const nlohmann::json& j);
std::vector<Chart> load_charts(const std::filesystem::path& file);
void save_charts(const std::vector<Chart>& charts, const std::filesystem::path& file);

}  // namespace molehill
