#include "molehill/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "csv_util.hpp"
#include "molehill/dates.hpp"
#include "molehill/errors.hpp"

namespace molehill {

namespace {

double parse_double(const std::string& s, std::size_t line, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw MalformedRecordError(line, std::string("bad ") + what + ": '" + s + "'");
    }
}

}  // namespace

const char* pos_name(Pos p) {
    switch (p) {
        case Pos::Adjective: return "adjective";
        case Pos::Verb: return "verb";
        case Pos::Noun: return "noun";
        case Pos::Other: return "other";
    }
    return "other";
}

Pos pos_from_name(const std::string& name) {
    if (name == "adjective") return Pos::Adjective;
    if (name == "verb") return Pos::Verb;
    if (name == "noun") return Pos::Noun;
    if (name == "other") return Pos::Other;
    throw DataError("unknown part of speech: " + name);
}

int AnnotationDataset::segment_of(const std::string& chart_id, double x_position) const {
    const auto it = charts.find(chart_id);
    if (it == charts.end()) throw UnknownChartError(chart_id);
    const Chart& chart = it->second;
    const double width = (chart.x_max() - chart.x_min()) / kSegmentsPerChart;
    int idx = static_cast<int>(std::floor((x_position - chart.x_min()) / width));
    return std::clamp(idx, 0, kSegmentsPerChart - 1);
}

double AnnotationDataset::segment_slope(const SegmentKey& key) const {
    const auto it = charts.find(key.chart_id);
    if (it == charts.end()) throw UnknownChartError(key.chart_id);
    return slope_value(it->second.segments.at(static_cast<std::size_t>(key.segment_index)));
}

AnnotationDataset make_dataset(std::vector<Chart> charts, std::vector<AnnotationRecord> records,
                               Lexicon lexicon, const IngestOptions& options) {
    AnnotationDataset ds;
    for (auto& chart : charts) {
        chart.validate();
        auto id = chart.id;
        if (!ds.charts.emplace(id, std::move(chart)).second)
            throw DataError("duplicate chart id: " + id);
    }
    ds.lexicon = std::move(lexicon);
    ds.records = std::move(records);
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        auto& rec = ds.records[i];
        rec.word = detail::to_lower(detail::trim(rec.word));
        if (rec.word.empty())
            throw MalformedRecordError(i + 1, "empty annotation word");
        const auto chart_it = ds.charts.find(rec.chart_id);
        if (chart_it == ds.charts.end()) throw UnknownChartError(rec.chart_id);
        const Chart& chart = chart_it->second;
        if (rec.x_position < chart.x_min() || rec.x_position > chart.x_max())
            throw MalformedRecordError(
                i + 1, "x_position " + std::to_string(rec.x_position) +
                           " outside chart x-range for " + rec.chart_id);
        const auto lex_it = ds.lexicon.find(rec.word);
        if (lex_it != ds.lexicon.end()) {
            rec.pos = lex_it->second;
        } else if (options.strict_lexicon) {
            throw UnknownWordError(rec.word);
        } else {
            rec.pos = Pos::Other;
        }
        const SegmentKey key{rec.chart_id, ds.segment_of(rec.chart_id, rec.x_position)};
        ds.by_segment[key].push_back(i);
    }
    return ds;
}

Lexicon load_lexicon(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open lexicon file: " + file.string());
    Lexicon lex;
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> fields;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        if (!detail::split_csv_line(line, fields))
            throw MalformedRecordError(lineno, "unbalanced quotes");
        if (lineno == 1 && detail::to_lower(detail::trim(fields[0])) == "word") continue;
        if (fields.size() != 2)
            throw MalformedRecordError(lineno, "lexicon rows need 2 fields (word,pos)");
        const std::string word = detail::to_lower(detail::trim(fields[0]));
        if (word.empty()) throw MalformedRecordError(lineno, "empty lexicon word");
        lex[word] = pos_from_name(detail::to_lower(detail::trim(fields[1])));
    }
    return lex;
}

std::vector<AnnotationRecord> load_annotations_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open annotations file: " + file.string());
    std::vector<AnnotationRecord> records;
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> fields;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        if (!detail::split_csv_line(line, fields))
            throw MalformedRecordError(lineno, "unbalanced quotes");
        if (lineno == 1) {
            if (detail::to_lower(detail::trim(fields[0])) != "participant_id")
                throw MalformedRecordError(1, "missing annotations header");
            continue;
        }
        if (fields.size() != 5)
            throw MalformedRecordError(lineno, "annotation rows need 5 fields");
        AnnotationRecord rec;
        rec.participant_id = detail::trim(fields[0]);
        rec.chart_id = detail::trim(fields[1]);
        rec.x_position = parse_double(detail::trim(fields[2]), lineno, "x_position");
        rec.word = fields[3];
        try {
            rec.timestamp = parse_rfc3339(detail::trim(fields[4]));
        } catch (const DataError& e) {
            throw MalformedRecordError(lineno, e.what());
        }
        if (rec.participant_id.empty() || rec.chart_id.empty())
            throw MalformedRecordError(lineno, "empty participant or chart id");
        records.push_back(std::move(rec));
    }
    return records;
}

void save_annotations_csv(const std::vector<AnnotationRecord>& records,
                          const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw DataError("cannot write annotations file: " + file.string());
    out << "participant_id,chart_id,x_position,word,timestamp\n";
    for (const auto& rec : records) {
        out << rec.participant_id << ',' << rec.chart_id << ',' << rec.x_position << ','
            << rec.word << ',' << format_rfc3339(rec.timestamp) << '\n';
    }
}

AnnotationDataset ingest(const std::filesystem::path& charts_file,
                         const std::filesystem::path& annotations_file,
                         const std::filesystem::path& lexicon_file,
                         const IngestOptions& options) {
    return make_dataset(load_charts(charts_file), load_annotations_csv(annotations_file),
                        load_lexicon(lexicon_file), options);
}

std::map<SegmentKey, std::map<std::string, int>> segment_counts(const AnnotationDataset& ds) {
    if (ds.empty()) throw EmptyDatasetError();
    std::map<SegmentKey, std::map<std::string, int>> counts;
    for (const auto& [key, indices] : ds.by_segment) {
        auto& words = counts[key];
        for (std::size_t i : indices) ++words[ds.records[i].word];
    }
    return counts;
}

std::vector<std::pair<std::int64_t, std::size_t>> saturation_curve(const AnnotationDataset& ds) {
    if (ds.empty()) throw EmptyDatasetError();
    std::vector<std::size_t> order(ds.records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ds.records[a].timestamp < ds.records[b].timestamp;
    });
    std::set<std::pair<std::string, SegmentKey>> seen;
    std::vector<std::pair<std::int64_t, std::size_t>> curve;
    curve.reserve(order.size());
    for (std::size_t i : order) {
        const auto& rec = ds.records[i];
        const SegmentKey key{rec.chart_id, ds.segment_of(rec.chart_id, rec.x_position)};
        seen.emplace(rec.word, key);
        curve.emplace_back(rec.timestamp, seen.size());
    }
    return curve;
}

nlohmann::json dataset_to_json(const AnnotationDataset& ds) {
    nlohmann::json j;
    auto& charts = j["charts"] = nlohmann::json::array();
    for (const auto& [id, chart] : ds.charts) charts.push_back(chart_to_json(chart));
    auto& lex = j["lexicon"] = nlohmann::json::object();
    for (const auto& [word, pos] : ds.lexicon) lex[word] = pos_name(pos);
    auto& recs = j["records"] = nlohmann::json::array();
    for (const auto& rec : ds.records) {
        recs.push_back({{"participant_id", rec.participant_id},
                        {"chart_id", rec.chart_id},
                        {"x_position", rec.x_position},
                        {"word", rec.word},
                        {"timestamp", format_rfc3339(rec.timestamp)}});
    }
    return j;
}

AnnotationDataset dataset_from_json(const nlohmann::json& j, const IngestOptions& options) {
    try {
        std::vector<Chart> charts = charts_from_json(j.at("charts"));
        Lexicon lex;
        for (const auto& [word, pos] : j.at("lexicon").items())
            lex[word] = pos_from_name(pos.get<std::string>());
        std::vector<AnnotationRecord> records;
        for (const auto& r : j.at("records")) {
            AnnotationRecord rec;
            rec.participant_id = r.at("participant_id").get<std::string>();
            rec.chart_id = r.at("chart_id").get<std::string>();
            rec.x_position = r.at("x_position").get<double>();
            rec.word = r.at("word").get<std::string>();
            rec.timestamp = parse_rfc3339(r.at("timestamp").get<std::string>());
            records.push_back(std::move(rec));
        }
        return make_dataset(std::move(charts), std::move(records), std::move(lex), options);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid dataset json: ") + e.what());
    }
}

void save_dataset(const AnnotationDataset& ds, const std::filesystem::path& file) {
    const nlohmann::json j = dataset_to_json(ds);
    if (file.extension() == ".bin") {
        std::ofstream out(file, std::ios::binary);
        if (!out) throw DataError("cannot write dataset file: " + file.string());
        const auto bytes = nlohmann::json::to_cbor(j);
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
    } else {
        std::ofstream out(file);
        if (!out) throw DataError("cannot write dataset file: " + file.string());
        out << j.dump(2) << '\n';
    }
}

AnnotationDataset load_dataset(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open dataset file: " + file.string());
    nlohmann::json j;
    try {
        if (file.extension() == ".bin") {
            std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                            std::istreambuf_iterator<char>()};
            j = nlohmann::json::from_cbor(bytes);
        } else {
            in >> j;
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError("invalid dataset file " + file.string() + ": " + e.what());
    }
    return dataset_from_json(j);
}

}  // namespace molehill
