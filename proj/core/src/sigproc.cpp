#include "molehill/sigproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "molehill/errors.hpp"

namespace molehill {

namespace {

// Solves the small SPD system from polynomial least squares by Gaussian
// elimination with partial pivoting. Dimension is order+1, at most ~6.
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        const double diag = a[col][col];
        if (diag == 0.0) throw DataError("singular least-squares system");
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / diag;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = b[i];
        for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
        x[i] = acc / a[i][i];
    }
    return x;
}

// Least-squares polynomial fit of ys[lo..hi] in t = x - x_center. Returns the
// coefficient vector (a0 = value at center, a1 = derivative at center, ...).
std::vector<double> local_fit(const Signal& s, std::size_t lo, std::size_t hi,
                              std::size_t center, int order) {
    const std::size_t m = hi - lo + 1;
    const int deg = std::min<int>(order, static_cast<int>(m) - 1);
    const std::size_t dim = static_cast<std::size_t>(deg) + 1;

    // Normal equations: moments of t and t-weighted y sums.
    std::vector<double> moments(2 * dim - 1, 0.0);
    std::vector<double> rhs(dim, 0.0);
    for (std::size_t j = lo; j <= hi; ++j) {
        const double t = s.xs[j] - s.xs[center];
        double p = 1.0;
        for (std::size_t k = 0; k < 2 * dim - 1; ++k) {
            moments[k] += p;
            p *= t;
        }
        p = 1.0;
        for (std::size_t k = 0; k < dim; ++k) {
            rhs[k] += p * s.ys[j];
            p *= t;
        }
    }
    std::vector<std::vector<double>> a(dim, std::vector<double>(dim));
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) a[r][c] = moments[r + c];
    return solve_dense(std::move(a), std::move(rhs));
}

void check_window(const Signal& s, int window, int order) {
    if (window < 3 || window % 2 == 0)
        throw BadWindowError("window must be odd and >= 3, got " + std::to_string(window));
    if (static_cast<std::size_t>(window) > s.size())
        throw BadWindowError("window " + std::to_string(window) + " exceeds signal length " +
                             std::to_string(s.size()));
    if (order < 0 || order >= window)
        throw BadWindowError("order " + std::to_string(order) + " must be in [0, window)");
}

double perpendicular_distance(double ax, double ay, double bx, double by, double px,
                              double py) {
    const double dx = bx - ax;
    const double dy = by - ay;
    const double len = std::hypot(dx, dy);
    if (len == 0.0) return std::hypot(px - ax, py - ay);
    return std::abs(dx * (py - ay) - dy * (px - ax)) / len;
}

void rdp_recurse(const Signal& s, std::size_t begin, std::size_t end, double epsilon,
                 std::vector<std::size_t>& keep) {
    if (end - begin < 2) return;
    double max_dist = 0.0;
    std::size_t split = begin;
    for (std::size_t i = begin + 1; i < end; ++i) {
        const double d = perpendicular_distance(s.xs[begin], s.ys[begin], s.xs[end],
                                                s.ys[end], s.xs[i], s.ys[i]);
        if (d > max_dist) {
            max_dist = d;
            split = i;
        }
    }
    if (max_dist > epsilon) {
        rdp_recurse(s, begin, split, epsilon, keep);
        keep.push_back(split);
        rdp_recurse(s, split, end, epsilon, keep);
    }
}

}  // namespace

Signal::Signal(std::vector<double> x, std::vector<double> y)
    : xs(std::move(x)), ys(std::move(y)) {
    validate();
}

void Signal::validate() const {
    if (xs.size() != ys.size())
        throw DataError("signal xs/ys length mismatch");
    if (xs.size() < 2)
        throw DataError("signal needs at least 2 points");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
            throw DataError("signal contains a non-finite value at index " + std::to_string(i));
        if (i > 0 && xs[i] <= xs[i - 1])
            throw DataError("signal xs not strictly increasing at index " + std::to_string(i));
    }
}

Signal normalize(const Signal& s) {
    s.validate();
    const auto [mn_it, mx_it] = std::minmax_element(s.ys.begin(), s.ys.end());
    const double mn = *mn_it;
    const double range = *mx_it - mn;
    Signal out;
    out.xs = s.xs;
    out.ys.resize(s.ys.size());
    if (range == 0.0) {
        std::fill(out.ys.begin(), out.ys.end(), 0.0);
        return out;
    }
    for (std::size_t i = 0; i < s.ys.size(); ++i) out.ys[i] = (s.ys[i] - mn) / range;
    return out;
}

Signal savgol(const Signal& s, int window, int order) {
    s.validate();
    check_window(s, window, order);
    const std::size_t n = s.size();
    const std::size_t half = static_cast<std::size_t>(window) / 2;
    Signal out;
    out.xs = s.xs;
    out.ys.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        out.ys[i] = local_fit(s, lo, hi, i, order)[0];
    }
    return out;
}

Signal first_derivative(const Signal& s, int window, int order) {
    s.validate();
    check_window(s, window, order);
    const std::size_t n = s.size();
    const std::size_t half = static_cast<std::size_t>(window) / 2;
    Signal out;
    out.xs = s.xs;
    out.ys.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n - 1, i + half);
        const auto coeffs = local_fit(s, lo, hi, i, order);
        out.ys[i] = coeffs.size() > 1 ? coeffs[1] : 0.0;
    }
    return out;
}

Signal resample(const Signal& s, std::size_t n) {
    s.validate();
    if (n < 2) throw DataError("resample needs n >= 2");
    const double x0 = s.xs.front();
    const double x1 = s.xs.back();
    Signal out;
    out.xs.resize(n);
    out.ys.resize(n);
    std::size_t seg = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = i + 1 == n ? x1 : x0 + (x1 - x0) * static_cast<double>(i) /
                                                    static_cast<double>(n - 1);
        while (seg + 2 < s.size() && s.xs[seg + 1] < x) ++seg;
        const double t = (x - s.xs[seg]) / (s.xs[seg + 1] - s.xs[seg]);
        out.xs[i] = x;
        out.ys[i] = s.ys[seg] + t * (s.ys[seg + 1] - s.ys[seg]);
    }
    return out;
}

ErrorTrace windowed_mae(const Signal& kernel, const Signal& signal) {
    kernel.validate();
    signal.validate();
    const std::size_t k = kernel.size();
    const std::size_t n = signal.size();
    if (k > n) throw KernelTooLongError(k, n);
    ErrorTrace trace;
    const std::size_t count = n - k + 1;
    trace.offsets.resize(count);
    trace.mae.resize(count);
    for (std::size_t o = 0; o < count; ++o) {
        double acc = 0.0;
        for (std::size_t i = 0; i < k; ++i) acc += std::abs(kernel.ys[i] - signal.ys[o + i]);
        trace.offsets[o] = o;
        trace.mae[o] = acc / static_cast<double>(k);
    }
    trace.z = z_scores(trace.mae);
    return trace;
}

std::vector<double> z_scores(const std::vector<double>& values) {
    if (values.empty()) throw DataError("z_scores needs at least one value");
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= n;
    std::vector<double> out(values.size(), 0.0);
    if (var == 0.0) return out;
    const double sd = std::sqrt(var);
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mean) / sd;
    return out;
}

std::vector<std::size_t> rdp_indices(const Signal& s, double epsilon) {
    s.validate();
    if (epsilon < 0.0) throw DataError("rdp epsilon must be >= 0");
    std::vector<std::size_t> keep;
    keep.push_back(0);
    rdp_recurse(s, 0, s.size() - 1, epsilon, keep);
    keep.push_back(s.size() - 1);
    return keep;
}

Signal rdp(const Signal& s, double epsilon) {
    const auto idx = rdp_indices(s, epsilon);
    Signal out;
    out.xs.reserve(idx.size());
    out.ys.reserve(idx.size());
    for (std::size_t i : idx) {
        out.xs.push_back(s.xs[i]);
        out.ys.push_back(s.ys[i]);
    }
    return out;
}

int savgol_window_for(std::size_t length) {
    const std::size_t max_odd = length % 2 == 1 ? length : length - 1;
    const double target = static_cast<double>(length) / 4.0;
    // Nearest odd integer to target.
    long w = std::lround((target - 1.0) / 2.0) * 2 + 1;
    w = std::max<long>(w, 5);
    w = std::min<long>(w, static_cast<long>(max_odd));
    return static_cast<int>(w);
}

Signal load_signal_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open signal file: " + file.string());
    std::string line;
    if (!std::getline(in, line)) throw DataError("signal file is empty: " + file.string());
    {
        // First line must be a header, not data.
        std::istringstream probe(line);
        double v;
        char c;
        if (probe >> v >> c) throw DataError("signal file is missing the x,y header line");
    }
    Signal s;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        double x, y;
        char comma;
        if (!(row >> x >> comma >> y) || comma != ',')
            throw MalformedRecordError(lineno, "expected 'x,y' numeric row");
        s.xs.push_back(x);
        s.ys.push_back(y);
    }
    s.validate();
    return s;
}

void save_signal_csv(const Signal& s, const std::filesystem::path& file) {
    s.validate();
    std::ofstream out(file);
    if (!out) throw DataError("cannot write signal file: " + file.string());
    out << "x,y\n";
    char buf[64];
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", s.xs[i], s.ys[i]);
        out << buf;
    }
}

}  // namespace molehill
