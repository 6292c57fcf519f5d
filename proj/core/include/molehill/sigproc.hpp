#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

namespace molehill {

/// A univariate series: strictly increasing x coordinates, one finite y per x.
struct Signal {
    std::vector<double> xs;
    std::vector<double> ys;

    Signal() = default;
    Signal(std::vector<double> x, std::vector<double> y);

    std::size_t size() const { return xs.size(); }

    /// Throws DataError unless length >= 2, xs strictly increasing, all values finite.
    void validate() const;
};

/// Per-offset match errors of a kernel slid along a signal.
struct ErrorTrace {
    std::vector<std::size_t> offsets;
    std::vector<double> mae;
    std::vector<double> z;
};

/// Affine-map ys onto [0,1]. A constant signal maps to all zeros.
Signal normalize(const Signal& s);

/// Savitzky-Golay smoothing: least-squares polynomial of degree `order` over the
/// centered window, evaluated at the center point. Edge points use shrunken
/// one-sided fits instead of padding. Window must be odd, 3 <= window <= length,
/// and order < window.
Signal savgol(const Signal& s, int window, int order);

/// Savitzky-Golay first derivative: slope of the local least-squares fit at the
/// center point, in y-units per x-unit. Same window/order rules as savgol.
Signal first_derivative(const Signal& s, int window, int order);

/// Linear interpolation onto a uniform n-point grid over [x_min, x_max].
Signal resample(const Signal& s, std::size_t n);

/// Mean absolute error between the kernel and every same-length window of the
/// signal, plus z-scores of the error array. Only ys take part; both inputs are
/// expected to come out of the same processing pipeline.
ErrorTrace windowed_mae(const Signal& kernel, const Signal& signal);

/// (v - mean) / population std. All zeros when the variance is zero.
std::vector<double> z_scores(const std::vector<double>& values);

/// Ramer-Douglas-Peucker simplification. Keeps endpoints and every point whose
/// perpendicular distance from the current chord exceeds epsilon.
Signal rdp(const Signal& s, double epsilon);

/// Index form of rdp: positions of the kept points in the input signal.
std::vector<std::size_t> rdp_indices(const Signal& s, double epsilon);

/// Smoothing window for a kernel of the given length: nearest odd integer to
/// length/4, clamped to [5, largest odd <= length].
int savgol_window_for(std::size_t length);

/// Two-column CSV (header line required) <-> Signal.
Signal load_signal_csv(const std::filesystem::path& file);
void save_signal_csv(const Signal& s, const std::filesystem::path& file);

}  // namespace molehill
