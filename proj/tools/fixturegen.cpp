// Regenerates the committed data/ fixture corpus: 16 seeded charts, a
// slope-aware synthetic annotation set (>= 500 records, >= 40 distinct words,
// every segment annotated), and the word,pos lexicon. Deterministic for a
// given --seed; the shipped corpus uses the defaults.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <vector>

#include <CLI11.hpp>

#include "molehill/chart.hpp"
#include "molehill/dataset.hpp"
#include "molehill/dates.hpp"
#include "molehill/errors.hpp"
#include "molehill/rng.hpp"

namespace {

namespace fs = std::filesystem;
using molehill::Pos;

struct PoolEntry {
    const char* word;
    Pos pos;
};

// Vocabulary grouped by generator slope so the fixture's statistics carry
// real signal (steep words on steep segments, hedges on gentle ones).
const std::map<double, std::vector<PoolEntry>>& pools() {
    static const std::map<double, std::vector<PoolEntry>> table = {
        {3.0,
         {{"soaring", Pos::Verb},
          {"spiking", Pos::Verb},
          {"taking off", Pos::Verb},
          {"surging", Pos::Verb},
          {"skyrocketing", Pos::Verb},
          {"rapid", Pos::Adjective},
          {"steep", Pos::Adjective},
          {"dramatic", Pos::Adjective},
          {"spike", Pos::Noun},
          {"summit", Pos::Noun}}},
        {1.0,
         {{"rising", Pos::Verb},
          {"climbing", Pos::Verb},
          {"growing", Pos::Verb},
          {"recovering", Pos::Verb},
          {"quick", Pos::Adjective},
          {"sharp", Pos::Adjective},
          {"ramp", Pos::Noun},
          {"peak", Pos::Noun}}},
        {0.5,
         {{"creeping", Pos::Verb},
          {"improving", Pos::Verb},
          {"rebounding", Pos::Verb},
          {"gradual", Pos::Adjective},
          {"slow", Pos::Adjective},
          {"gentle", Pos::Adjective},
          {"steady", Pos::Adjective},
          {"incline", Pos::Noun}}},
        {0.0,
         {{"stalling", Pos::Verb},
          {"flatlining", Pos::Verb},
          {"stagnating", Pos::Verb},
          {"flat", Pos::Adjective},
          {"stagnant", Pos::Adjective},
          {"consistent", Pos::Adjective},
          {"calm", Pos::Adjective},
          {"plateau", Pos::Noun},
          {"shelf", Pos::Noun},
          {"lull", Pos::Noun}}},
        {-0.5,
         {{"easing", Pos::Verb},
          {"drifting", Pos::Verb},
          {"sagging", Pos::Verb},
          {"mild", Pos::Adjective},
          {"slight", Pos::Adjective},
          {"soft", Pos::Adjective},
          {"dip", Pos::Noun}}},
        {-1.0,
         {{"falling", Pos::Verb},
          {"dropping", Pos::Verb},
          {"declining", Pos::Verb},
          {"sliding", Pos::Verb},
          {"weak", Pos::Adjective},
          {"bearish", Pos::Adjective},
          {"valley", Pos::Noun},
          {"slump", Pos::Noun}}},
        {-3.0,
         {{"tanking", Pos::Verb},
          {"crashing", Pos::Verb},
          {"plummeting", Pos::Verb},
          {"collapsing", Pos::Verb},
          {"sudden", Pos::Adjective},
          {"severe", Pos::Adjective},
          {"volatile", Pos::Adjective},
          {"cliff", Pos::Noun},
          {"trough", Pos::Noun}}},
    };
    return table;
}

void write_lexicon(const fs::path& file) {
    std::map<std::string, Pos> words;
    for (const auto& [slope, pool] : pools())
        for (const PoolEntry& e : pool) words[e.word] = e.pos;
    std::ofstream out(file);
    if (!out) throw molehill::DataError("cannot write " + file.string());
    out << "word,pos\n";
    for (const auto& [word, pos] : words) out << word << ',' << molehill::pos_name(pos) << '\n';
    std::cerr << "lexicon: " << words.size() << " words\n";
}

void write_annotations(const std::vector<molehill::Chart>& charts, std::uint64_t seed,
                       const fs::path& file) {
    std::ofstream out(file);
    if (!out) throw molehill::DataError("cannot write " + file.string());
    out << "participant_id,chart_id,x_position,word,timestamp\n";

    std::mt19937_64 rng(molehill::mix_seed(seed));
    const std::int64_t t0 = molehill::parse_rfc3339("2023-05-01T12:00:00Z");
    std::size_t total = 0;
    std::set<std::string> distinct;
    char buf[160];
    for (const auto& chart : charts) {
        for (int seg = 0; seg < molehill::kSegmentsPerChart; ++seg) {
            const double slope = molehill::slope_value(chart.segments[static_cast<std::size_t>(seg)]);
            const auto& pool = pools().at(slope);
            const auto n = 4 + molehill::bounded_uniform(rng, 3);
            for (std::uint64_t r = 0; r < n; ++r) {
                const PoolEntry& e = pool[molehill::bounded_uniform(rng, pool.size())];
                const double x = molehill::kChartXMin + seg * molehill::kSegmentWidth + 0.5 +
                                 9.0 * molehill::uniform_unit(rng);
                const auto participant = molehill::bounded_uniform(rng, 30) + 1;
                const auto ts = t0 + static_cast<std::int64_t>(total) * 137;
                std::snprintf(buf, sizeof buf, "p%02llu,%s,%.6g,%s,%s\n",
                              static_cast<unsigned long long>(participant), chart.id.c_str(), x,
                              e.word, molehill::format_rfc3339(ts).c_str());
                out << buf;
                distinct.insert(e.word);
                ++total;
            }
        }
    }
    std::cerr << "annotations: " << total << " records, " << distinct.size()
              << " distinct words\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Regenerate the data/ fixture corpus"};
    std::string outdir = "data";
    std::uint64_t chart_seed = 1;
    std::uint64_t annotation_seed = 7;
    int count = 16;
    app.add_option("--outdir", outdir)->capture_default_str();
    app.add_option("--chart-seed", chart_seed)->capture_default_str();
    app.add_option("--seed", annotation_seed, "annotation sampling seed")->capture_default_str();
    app.add_option("--count", count)->capture_default_str();
    try {
        app.parse(argc, argv);
        fs::create_directories(outdir);
        const auto charts = molehill::generate_batch(chart_seed, count);
        molehill::save_charts(charts, fs::path(outdir) / "charts.json");
        write_lexicon(fs::path(outdir) / "lexicon.csv");
        write_annotations(charts, annotation_seed, fs::path(outdir) / "annotations.csv");
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
