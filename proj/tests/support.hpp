#pragma once

// Shared fixture plumbing for the test suites.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "molehill/chart.hpp"
#include "molehill/dataset.hpp"

namespace testsupport {

inline std::filesystem::path data_dir() { return MOLEHILL_DATA_DIR; }
inline std::filesystem::path fixture_dir() { return MOLEHILL_FIXTURE_DIR; }

inline std::string slurp(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << text;
}

/// Fresh scratch directory under the system temp root.
inline std::filesystem::path scratch_dir(const std::string& tag) {
    auto dir = std::filesystem::temp_directory_path() / ("molehill-test-" + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Mid-segment x position on the standard 1960-2030 chart grid.
inline double seg_x(int segment) { return 1960.0 + segment * 10.0 + 5.0; }

inline molehill::AnnotationRecord rec(std::string participant, std::string chart, double x,
                                      std::string word, std::int64_t timestamp = 0) {
    molehill::AnnotationRecord r;
    r.participant_id = std::move(participant);
    r.chart_id = std::move(chart);
    r.x_position = x;
    r.word = std::move(word);
    r.timestamp = timestamp;
    return r;
}

inline molehill::Chart test_chart(const std::string& id,
                                  const std::array<molehill::SlopeClass, 7>& segments) {
    return molehill::chart_from_segments(segments, id, "Test Series");
}

/// The committed synthetic dataset (16 charts, 60 words, 572 records).
inline const molehill::AnnotationDataset& fixture_dataset() {
    static const molehill::AnnotationDataset ds =
        molehill::ingest(data_dir() / "charts.json", data_dir() / "annotations.csv",
                         data_dir() / "lexicon.csv", {});
    return ds;
}

}  // namespace testsupport
