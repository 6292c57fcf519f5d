#pragma once

// Quantified annotation semantics: per-word slope statistics, asymmetric
// co-occurrence, agreement/purity factors, the scaled co-occurrence count
// matrix, Ward-linkage clustering, and the adjective-verb pair slope table.

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "molehill/dataset.hpp"

namespace molehill {

struct WordSlope {
    double mean_slope = 0.0;   // mean generator slope over annotation occurrences
    int segment_count = 0;     // distinct segments bearing the word
    int annotation_count = 0;  // total occurrences
};
using SlopeStats = std::map<std::string, WordSlope>;

struct WordFactor {
    double agreement = 0.0;  // 1 - segments/annotations, in [0,1)
    double purity = 0.0;     // mean per-segment share, in (0,1]
};
using WordFactors = std::map<std::string, WordFactor>;

// (word_a, word_b) -> mean percentage share of b on segments containing a.
using CoOccurrenceTable = std::vector<std::tuple<std::string, std::string, double>>;

// Symmetric presence-count matrix scaled into [0,1] with a unit diagonal.
struct ClusterMatrix {
    std::vector<std::string> words;
    std::vector<std::vector<double>> values;
};

// One agglomerative merge. Cluster ids follow the usual linkage convention:
// leaves are 0..n-1 in word order, the step-k merge creates cluster n+k.
struct MergeStep {
    int cluster_a = 0;
    int cluster_b = 0;
    double distance = 0.0;  // Ward linkage distance (Euclidean form)
    int size = 0;           // members in the merged cluster
};

struct Dendrogram {
    std::vector<std::string> words;
    std::vector<MergeStep> steps;
};

struct PairSlope {
    double mean_slope = 0.0;  // mean generator slope over shared segments
    int co_count = 0;         // segments shared by the pair
};
// keyed (adjective, verb)
using PairSlopeTable = std::map<std::pair<std::string, std::string>, PairSlope>;

SlopeStats average_slopes(const AnnotationDataset& ds);

// Mean over segments containing word_a of word_b's percentage share of that
// segment's annotations. Asymmetric; co_occurrence(a, a) == 100 * purity(a).
double co_occurrence(const AnnotationDataset& ds, const std::string& word_a,
                     const std::string& word_b);

// Sparse nonzero triplets (a, b, value) for a != b, sorted by (a, b).
CoOccurrenceTable co_occurrence_table(const AnnotationDataset& ds);

double agreement_factor(const AnnotationDataset& ds, const std::string& word);
double purity_factor(const AnnotationDataset& ds, const std::string& word);
WordFactors word_factors(const AnnotationDataset& ds);

// Times each pair of words shares a segment (presence, not multiplicity),
// divided by the max off-diagonal count, diagonal pinned to 1.0. Words that
// occur once and share no segment with anything are dropped (all-zero rows
// make Ward degenerate).
ClusterMatrix cluster_matrix(const AnnotationDataset& ds);

// Ward's linkage over Euclidean distances between matrix rows, Lance-Williams
// recurrence. Equal-criterion ties merge the pair with the smallest
// (min word index, max word index).
Dendrogram ward_cluster(const ClusterMatrix& m);

std::string dendrogram_to_newick(const Dendrogram& d);

PairSlopeTable pair_slope_table(const AnnotationDataset& ds);

struct Analysis {
    SlopeStats slopes;
    CoOccurrenceTable co_occurrence;
    WordFactors factors;
    ClusterMatrix matrix;
    Dendrogram dendrogram;
    PairSlopeTable pair_table;
};

Analysis analyze(const AnnotationDataset& ds);

nlohmann::json analysis_to_json(const Analysis& a);
nlohmann::json pair_table_to_json(const PairSlopeTable& table);
PairSlopeTable pair_table_from_json(const nlohmann::json& j);
// Accepts either a bare pair-table array or a full stats.json document.
PairSlopeTable pair_table_from_stats_json(const nlohmann::json& j);

}  // namespace molehill
