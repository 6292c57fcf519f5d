#include "molehill/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "molehill/errors.hpp"

namespace molehill {

namespace {

struct WordView {
    int occurrences = 0;
    std::vector<SegmentKey> segments;  // distinct, ascending
};

struct Tally {
    std::map<SegmentKey, std::map<std::string, int>> by_seg;
    std::map<SegmentKey, int> seg_total;
    std::map<std::string, WordView> words;
};

Tally tally(const AnnotationDataset& ds) {
    Tally t;
    t.by_seg = segment_counts(ds);  // throws EmptyDataset
    for (const auto& [key, counts] : t.by_seg) {
        int total = 0;
        for (const auto& [word, n] : counts) {
            total += n;
            auto& view = t.words[word];
            view.occurrences += n;
            view.segments.push_back(key);
        }
        t.seg_total[key] = total;
    }
    return t;
}

const WordView& require_word(const Tally& t, const std::string& word) {
    const auto it = t.words.find(word);
    if (it == t.words.end()) throw WordAbsentError(word);
    return it->second;
}

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string newick_name(const std::string& word) {
    const bool plain = !word.empty() &&
                       word.find_first_not_of(
                           "abcdefghijklmnopqrstuvwxyz"
                           "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-") == std::string::npos;
    if (plain) return word;
    std::string out = "'";
    for (char c : word) {
        out += c;
        if (c == '\'') out += c;
    }
    out += '\'';
    return out;
}

}  // namespace

SlopeStats average_slopes(const AnnotationDataset& ds) {
    if (ds.empty()) throw EmptyDatasetError();
    std::map<std::string, double> sums;
    SlopeStats stats;
    for (const auto& [key, indices] : ds.by_segment) {
        const double slope = ds.segment_slope(key);
        std::set<std::string> here;
        for (std::size_t i : indices) {
            const auto& word = ds.records[i].word;
            sums[word] += slope;
            ++stats[word].annotation_count;
            here.insert(word);
        }
        for (const auto& word : here) ++stats[word].segment_count;
    }
    for (auto& [word, ws] : stats) ws.mean_slope = sums[word] / ws.annotation_count;
    return stats;
}

double co_occurrence(const AnnotationDataset& ds, const std::string& word_a,
                     const std::string& word_b) {
    const Tally t = tally(ds);
    const WordView& a = require_word(t, word_a);
    double acc = 0.0;
    for (const SegmentKey& key : a.segments) {
        const auto& counts = t.by_seg.at(key);
        const auto it = counts.find(word_b);
        if (it != counts.end())
            acc += 100.0 * it->second / t.seg_total.at(key);
    }
    return acc / static_cast<double>(a.segments.size());
}

CoOccurrenceTable co_occurrence_table(const AnnotationDataset& ds) {
    const Tally t = tally(ds);
    CoOccurrenceTable out;
    for (const auto& [word_a, view] : t.words) {
        std::map<std::string, double> acc;
        for (const SegmentKey& key : view.segments) {
            const double total = t.seg_total.at(key);
            for (const auto& [word_b, n] : t.by_seg.at(key))
                if (word_b != word_a) acc[word_b] += 100.0 * n / total;
        }
        for (const auto& [word_b, sum] : acc)
            out.emplace_back(word_a, word_b, sum / static_cast<double>(view.segments.size()));
    }
    return out;
}

double agreement_factor(const AnnotationDataset& ds, const std::string& word) {
    const Tally t = tally(ds);
    const WordView& v = require_word(t, word);
    return 1.0 - static_cast<double>(v.segments.size()) / static_cast<double>(v.occurrences);
}

double purity_factor(const AnnotationDataset& ds, const std::string& word) {
    const Tally t = tally(ds);
    const WordView& v = require_word(t, word);
    double acc = 0.0;
    for (const SegmentKey& key : v.segments)
        acc += static_cast<double>(t.by_seg.at(key).at(word)) / t.seg_total.at(key);
    return acc / static_cast<double>(v.segments.size());
}

WordFactors word_factors(const AnnotationDataset& ds) {
    const Tally t = tally(ds);
    WordFactors out;
    for (const auto& [word, v] : t.words) {
        double share = 0.0;
        for (const SegmentKey& key : v.segments)
            share += static_cast<double>(t.by_seg.at(key).at(word)) / t.seg_total.at(key);
        out[word] = WordFactor{
            1.0 - static_cast<double>(v.segments.size()) / static_cast<double>(v.occurrences),
            share / static_cast<double>(v.segments.size())};
    }
    return out;
}

ClusterMatrix cluster_matrix(const AnnotationDataset& ds) {
    const Tally t = tally(ds);
    if (t.words.size() < 2) throw SingleWordError("dataset has fewer than two distinct words");

    std::map<std::pair<std::string, std::string>, int> shared;
    for (const auto& [key, counts] : t.by_seg) {
        for (auto it_a = counts.begin(); it_a != counts.end(); ++it_a)
            for (auto it_b = std::next(it_a); it_b != counts.end(); ++it_b)
                ++shared[{it_a->first, it_b->first}];
    }
    std::map<std::string, int> row_sum;
    for (const auto& [pair, n] : shared) {
        row_sum[pair.first] += n;
        row_sum[pair.second] += n;
    }

    ClusterMatrix m;
    for (const auto& [word, view] : t.words) {
        if (view.occurrences == 1 && row_sum[word] == 0) continue;  // isolated singleton
        m.words.push_back(word);
    }
    if (m.words.size() < 2)
        throw SingleWordError("every word is an isolated singleton after exclusion");

    int max_count = 0;
    for (const auto& [pair, n] : shared) max_count = std::max(max_count, n);

    const std::size_t n = m.words.size();
    m.values.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        m.values[i][i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto it = shared.find({m.words[i], m.words[j]});
            const double v =
                (it == shared.end() || max_count == 0) ? 0.0 : static_cast<double>(it->second) / max_count;
            m.values[i][j] = m.values[j][i] = v;
        }
    }
    return m;
}

Dendrogram ward_cluster(const ClusterMatrix& m) {
    const int n = static_cast<int>(m.words.size());
    if (n < 2) throw SingleWordError("clustering needs a matrix with at least two rows");

    // Squared Euclidean distances between rows; Lance-Williams keeps them
    // squared through the merges, reported distances are the square roots.
    std::vector<std::vector<double>> d2(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) {
                const double diff = m.values[i][k] - m.values[j][k];
                acc += diff * diff;
            }
            d2[i][j] = d2[j][i] = acc;
        }

    std::vector<bool> alive(n, true);
    std::vector<int> id(n), size(n, 1), rep(n);
    for (int i = 0; i < n; ++i) id[i] = rep[i] = i;

    Dendrogram out;
    out.words = m.words;
    for (int step = 0; step < n - 1; ++step) {
        int bi = -1, bj = -1;
        double best = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (int j = i + 1; j < n; ++j) {
                if (!alive[j]) continue;
                const double d = d2[i][j];
                if (bi < 0 || d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                } else if (d == best) {
                    const auto cur = std::minmax(rep[i], rep[j]);
                    const auto win = std::minmax(rep[bi], rep[bj]);
                    if (cur < win) {
                        bi = i;
                        bj = j;
                    }
                }
            }
        }

        MergeStep ms;
        ms.cluster_a = std::min(id[bi], id[bj]);
        ms.cluster_b = std::max(id[bi], id[bj]);
        ms.distance = std::sqrt(std::max(best, 0.0));
        ms.size = size[bi] + size[bj];
        out.steps.push_back(ms);

        const double ni = size[bi], nj = size[bj];
        for (int k = 0; k < n; ++k) {
            if (!alive[k] || k == bi || k == bj) continue;
            const double nk = size[k];
            d2[bi][k] = d2[k][bi] = ((ni + nk) * d2[bi][k] + (nj + nk) * d2[bj][k] - nk * best) /
                                    (ni + nj + nk);
        }
        alive[bj] = false;
        id[bi] = n + step;
        size[bi] += size[bj];
        rep[bi] = std::min(rep[bi], rep[bj]);
    }
    return out;
}

std::string dendrogram_to_newick(const Dendrogram& d) {
    const int n = static_cast<int>(d.words.size());
    std::vector<std::string> text(static_cast<std::size_t>(n) + d.steps.size());
    std::vector<double> height(text.size(), 0.0);
    for (int i = 0; i < n; ++i) text[i] = newick_name(d.words[i]);
    for (std::size_t s = 0; s < d.steps.size(); ++s) {
        const MergeStep& ms = d.steps[s];
        const std::size_t node = n + s;
        height[node] = ms.distance;
        const double ba = std::max(ms.distance - height[ms.cluster_a], 0.0);
        const double bb = std::max(ms.distance - height[ms.cluster_b], 0.0);
        text[node] = "(" + text[ms.cluster_a] + ":" + fmt_g(ba) + "," + text[ms.cluster_b] + ":" +
                     fmt_g(bb) + ")";
    }
    return text.back() + ";";
}

PairSlopeTable pair_slope_table(const AnnotationDataset& ds) {
    if (ds.empty()) throw EmptyDatasetError();
    std::map<std::pair<std::string, std::string>, std::pair<double, int>> acc;
    for (const auto& [key, indices] : ds.by_segment) {
        std::set<std::string> adjectives, verbs;
        for (std::size_t i : indices) {
            const auto& rec = ds.records[i];
            if (rec.pos == Pos::Adjective) adjectives.insert(rec.word);
            if (rec.pos == Pos::Verb) verbs.insert(rec.word);
        }
        if (adjectives.empty() || verbs.empty()) continue;
        const double slope = ds.segment_slope(key);
        for (const auto& adj : adjectives)
            for (const auto& verb : verbs) {
                auto& cell = acc[{adj, verb}];
                cell.first += slope;
                cell.second += 1;
            }
    }
    if (acc.empty()) throw NoPairsError();
    PairSlopeTable table;
    for (const auto& [pair, cell] : acc)
        table[pair] = PairSlope{cell.first / cell.second, cell.second};
    return table;
}

Analysis analyze(const AnnotationDataset& ds) {
    Analysis a;
    a.slopes = average_slopes(ds);
    a.co_occurrence = co_occurrence_table(ds);
    a.factors = word_factors(ds);
    a.matrix = cluster_matrix(ds);
    a.dendrogram = ward_cluster(a.matrix);
    a.pair_table = pair_slope_table(ds);
    return a;
}

nlohmann::json analysis_to_json(const Analysis& a) {
    nlohmann::json j;
    auto& slopes = j["slopes"] = nlohmann::json::object();
    for (const auto& [word, ws] : a.slopes)
        slopes[word] = {{"mean_slope", ws.mean_slope},
                        {"segment_count", ws.segment_count},
                        {"annotation_count", ws.annotation_count}};
    auto& co = j["co_occurrence"] = nlohmann::json::array();
    for (const auto& [wa, wb, v] : a.co_occurrence) co.push_back({wa, wb, v});
    auto& factors = j["factors"] = nlohmann::json::object();
    for (const auto& [word, f] : a.factors)
        factors[word] = {{"agreement", f.agreement}, {"purity", f.purity}};
    j["cluster_matrix"] = {{"words", a.matrix.words}, {"values", a.matrix.values}};
    auto merges = nlohmann::json::array();
    for (const auto& ms : a.dendrogram.steps)
        merges.push_back({ms.cluster_a, ms.cluster_b, ms.distance, ms.size});
    j["dendrogram"] = {{"words", a.dendrogram.words},
                       {"merges", merges},
                       {"newick", dendrogram_to_newick(a.dendrogram)}};
    j["pair_table"] = pair_table_to_json(a.pair_table);
    return j;
}

nlohmann::json pair_table_to_json(const PairSlopeTable& table) {
    auto arr = nlohmann::json::array();
    for (const auto& [pair, ps] : table)
        arr.push_back({{"adjective", pair.first},
                       {"verb", pair.second},
                       {"mean_slope", ps.mean_slope},
                       {"co_count", ps.co_count}});
    return arr;
}

PairSlopeTable pair_table_from_json(const nlohmann::json& j) {
    PairSlopeTable table;
    try {
        for (const auto& row : j) {
            const auto adj = row.at("adjective").get<std::string>();
            const auto verb = row.at("verb").get<std::string>();
            table[{adj, verb}] =
                PairSlope{row.at("mean_slope").get<double>(), row.at("co_count").get<int>()};
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("invalid pair table json: ") + e.what());
    }
    return table;
}

PairSlopeTable pair_table_from_stats_json(const nlohmann::json& j) {
    if (j.is_array()) return pair_table_from_json(j);
    if (j.is_object() && j.contains("pair_table")) return pair_table_from_json(j["pair_table"]);
    throw DataError("no pair table found in stats json");
}

}  // namespace molehill
