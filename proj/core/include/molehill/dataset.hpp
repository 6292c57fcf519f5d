#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "molehill/chart.hpp"

namespace molehill {

enum class Pos { Adjective, Verb, Noun, Other };

const char* pos_name(Pos p);
Pos pos_from_name(const std::string& name);

/// One crowdsourced annotation: who, which chart, where along it, what word, when.
struct AnnotationRecord {
    std::string participant_id;
    std::string chart_id;
    double x_position = 0.0;
    std::string word;
    Pos pos = Pos::Other;
    std::int64_t timestamp = 0;  // UTC epoch seconds
};

/// Join key for per-segment statistics.
struct SegmentKey {
    std::string chart_id;
    int segment_index = 0;  // 0..6

    auto operator<=>(const SegmentKey&) const = default;
};

using Lexicon = std::map<std::string, Pos>;

/// Immutable, validated view of annotation records joined to their charts.
struct AnnotationDataset {
    std::map<std::string, Chart> charts;
    std::vector<AnnotationRecord> records;
    std::map<SegmentKey, std::vector<std::size_t>> by_segment;
    Lexicon lexicon;

    bool empty() const { return records.empty(); }

    /// Segment index for an x position on a chart: floor((x - x_min) / width),
    /// clamped to 6. Boundaries belong to the right segment.
    int segment_of(const std::string& chart_id, double x_position) const;

    /// Generator slope of a segment.
    double segment_slope(const SegmentKey& key) const;
};

struct IngestOptions {
    bool strict_lexicon = false;
};

/// Builds a validated dataset from in-memory parts; all file ingest funnels here.
AnnotationDataset make_dataset(std::vector<Chart> charts, std::vector<AnnotationRecord> records,
                               Lexicon lexicon, const IngestOptions& options = {});

/// charts: chart JSON array; annotations: CSV `participant_id,chart_id,x_position,word,timestamp`;
/// lexicon: CSV `word,pos`.
AnnotationDataset ingest(const std::filesystem::path& charts_file,
                         const std::filesystem::path& annotations_file,
                         const std::filesystem::path& lexicon_file,
                         const IngestOptions& options = {});

Lexicon load_lexicon(const std::filesystem::path& file);
std::vector<AnnotationRecord> load_annotations_csv(const std::filesystem::path& file);
void save_annotations_csv(const std::vector<AnnotationRecord>& records,
                          const std::filesystem::path& file);

/// Per-segment word tallies. Sum of all counts equals the record count.
std::map<SegmentKey, std::map<std::string, int>> segment_counts(const AnnotationDataset& ds);

/// Cumulative count of distinct (word, segment) pairs in timestamp order, one
/// entry per record; ties broken by ingest order.
std::vector<std::pair<std::int64_t, std::size_t>> saturation_curve(const AnnotationDataset& ds);

nlohmann::json dataset_to_json(const AnnotationDataset& ds);
AnnotationDataset dataset_from_json(const nlohmann::json& j, const IngestOptions& options = {});

/// `.json` writes pretty JSON, `.bin` writes the same document as CBOR.
void save_dataset(const AnnotationDataset& ds, const std::filesystem::path& file);
AnnotationDataset load_dataset(const std::filesystem::path& file);

}  // namespace molehill
