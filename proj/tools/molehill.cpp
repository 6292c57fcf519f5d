// molehill: generate stimulus charts, ingest annotation datasets, quantify
// their semantics, and find/label/render shapes in unlabeled signals.
//
// Exit codes: 0 success, 1 usage, 2 data/validation error, 3 transport error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "molehill/chart.hpp"
#include "molehill/dataset.hpp"
#include "molehill/dates.hpp"
#include "molehill/detect.hpp"
#include "molehill/errors.hpp"
#include "molehill/llm.hpp"
#include "molehill/render.hpp"
#include "molehill/semantics.hpp"
#include "molehill/sigproc.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

bool g_verbose = false;

void note(const std::string& message) {
    if (g_verbose) std::cerr << "molehill: " << message << '\n';
}

json read_json(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw molehill::DataError("cannot open file: " + file.string());
    try {
        json j;
        in >> j;
        return j;
    } catch (const json::exception& e) {
        throw molehill::DataError("invalid json in " + file.string() + ": " + e.what());
    }
}

void write_text(const std::string& text, const fs::path& file) {
    std::ofstream out(file);
    if (!out) throw molehill::DataError("cannot write file: " + file.string());
    out << text;
}

// Pretty-printed, keys sorted (json objects are ordered maps here).
void emit_json(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        write_text(j.dump(2) + "\n", out);
    }
}

std::string iso_date(const molehill::CivilDate& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
    return buf;
}

struct DetectFlags {
    std::string signal;
    std::string dataset;
    molehill::DetectionParams params;
    unsigned threads = 0;

    void attach(CLI::App* cmd, bool with_inputs) {
        if (with_inputs) {
            cmd->add_option("--signal", signal, "unlabeled signal csv (x,y with header)")
                ->required();
            cmd->add_option("--dataset", dataset, "ingested dataset (.json or .bin)")->required();
        }
        cmd->add_option("--max-mae", params.max_mae, "MAE qualify threshold")
            ->capture_default_str();
        cmd->add_option("--max-z", params.max_z, "z-score qualify threshold")
            ->capture_default_str();
        cmd->add_option("--window-scale", params.window_scale, "kernel width scale")
            ->capture_default_str();
        cmd->add_option("--merge-gap", params.merge_gap, "max gap between merged points")
            ->capture_default_str();
        cmd->add_option("--threads", threads, "worker threads (0 = hardware)")
            ->capture_default_str();
    }

    std::vector<molehill::LabeledRegion> run(const molehill::Signal& sig,
                                             const molehill::AnnotationDataset& ds) const {
        const auto kernels = molehill::build_kernels(ds);
        note("matching " + std::to_string(kernels.size()) + " kernel variants");
        if (threads == 0) return molehill::find_shapes(sig, kernels, params);
        return molehill::find_shapes_with_threads(sig, kernels, params, threads);
    }
};

void setup_generate(CLI::App& app) {
    auto cmd = app.add_subcommand("generate", "Generate seeded 7-segment stimulus charts");
    auto seed = std::make_shared<std::uint64_t>(1);
    auto count = std::make_shared<int>(16);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--seed", *seed, "PRNG seed")->capture_default_str();
    cmd->add_option("--count", *count, "number of charts")->capture_default_str();
    cmd->add_option("--out", *out, "output charts json")->required();
    cmd->callback([seed, count, out] {
        const auto charts = molehill::generate_batch(*seed, *count);
        molehill::save_charts(charts, *out);
        note("wrote " + std::to_string(charts.size()) + " charts to " + *out);
    });
}

void setup_metrics(CLI::App& app) {
    auto cmd = app.add_subcommand("metrics", "Chart-validation metrics (and saturation curve)");
    auto charts_file = std::make_shared<std::string>();
    auto dataset_file = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--charts", *charts_file, "charts json")->required();
    cmd->add_option("--dataset", *dataset_file, "optional dataset for the saturation curve");
    cmd->add_option("--out", *out, "output json (default stdout)");
    cmd->callback([charts_file, dataset_file, out] {
        json j;
        auto& per_chart = j["charts"] = json::object();
        for (const auto& chart : molehill::load_charts(*charts_file)) {
            const auto m = molehill::chart_metrics(chart);
            per_chart[chart.id] = {{"net_slope", m.net_slope},
                                   {"pct_up", m.pct_up},
                                   {"pct_flat", m.pct_flat},
                                   {"pct_down", m.pct_down},
                                   {"inflection_count", m.inflection_count}};
        }
        if (!dataset_file->empty()) {
            const auto ds = molehill::load_dataset(*dataset_file);
            auto& curve = j["saturation"] = json::array();
            for (const auto& [ts, unique] : molehill::saturation_curve(ds))
                curve.push_back({molehill::format_rfc3339(ts), unique});
        }
        emit_json(j, *out);
    });
}

void setup_ingest(CLI::App& app) {
    auto cmd = app.add_subcommand("ingest", "Validate and index an annotation dataset");
    auto charts = std::make_shared<std::string>();
    auto annotations = std::make_shared<std::string>();
    auto lexicon = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto strict = std::make_shared<bool>(false);
    cmd->add_option("--charts", *charts, "charts json")->required();
    cmd->add_option("--annotations", *annotations, "annotations csv")->required();
    cmd->add_option("--lexicon", *lexicon, "word,pos lexicon csv")->required();
    cmd->add_option("--out", *out, "output dataset (.json or .bin)")->required();
    cmd->add_flag("--strict-lexicon", *strict, "reject words missing from the lexicon");
    cmd->callback([charts, annotations, lexicon, out, strict] {
        molehill::IngestOptions options;
        options.strict_lexicon = *strict;
        const auto ds = molehill::ingest(*charts, *annotations, *lexicon, options);
        molehill::save_dataset(ds, *out);
        note("ingested " + std::to_string(ds.records.size()) + " records");
    });
}

void setup_analyze(CLI::App& app) {
    auto cmd = app.add_subcommand("analyze", "Quantified semantics statistics");
    auto dataset = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto newick = std::make_shared<std::string>();
    cmd->add_option("--dataset", *dataset, "ingested dataset")->required();
    cmd->add_option("--out", *out, "output stats json")->required();
    cmd->add_option("--newick", *newick, "also write the dendrogram as Newick text");
    cmd->callback([dataset, out, newick] {
        const auto ds = molehill::load_dataset(*dataset);
        const auto analysis = molehill::analyze(ds);
        emit_json(molehill::analysis_to_json(analysis), *out);
        if (!newick->empty())
            write_text(molehill::dendrogram_to_newick(analysis.dendrogram) + "\n", *newick);
    });
}

void setup_detect(CLI::App& app) {
    auto cmd = app.add_subcommand("detect", "Find annotated shapes in an unlabeled signal");
    auto flags = std::make_shared<DetectFlags>();
    auto out = std::make_shared<std::string>();
    flags->attach(cmd, true);
    cmd->add_option("--out", *out, "output regions json")->required();
    cmd->callback([flags, out] {
        const auto sig = molehill::load_signal_csv(flags->signal);
        const auto ds = molehill::load_dataset(flags->dataset);
        const auto regions = flags->run(sig, ds);
        emit_json(molehill::regions_to_json(regions), *out);
        note("found " + std::to_string(regions.size()) + " regions");
    });
}

void setup_label(CLI::App& app) {
    auto cmd = app.add_subcommand("label", "Label linear pieces with adjective-verb pairs");
    auto signal = std::make_shared<std::string>();
    auto stats = std::make_shared<std::string>();
    auto epsilon = std::make_shared<double>();
    auto window = std::make_shared<double>(0.5);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--signal", *signal, "signal csv")->required();
    cmd->add_option("--stats", *stats, "stats json from `analyze` (pair table source)")
        ->required();
    cmd->add_option("--epsilon", *epsilon, "RDP tolerance in normalized units")->required();
    cmd->add_option("--slope-window", *window, "max |pair slope - region slope|")
        ->capture_default_str();
    cmd->add_option("--out", *out, "output labels json")->required();
    cmd->callback([signal, stats, epsilon, window, out] {
        const auto sig = molehill::load_signal_csv(*signal);
        const auto table = molehill::pair_table_from_stats_json(read_json(*stats));
        const auto labels = molehill::label_slopes(sig, table, *epsilon, *window);
        emit_json(molehill::labels_to_json(labels, sig), *out);
        note("labeled " + std::to_string(labels.size()) + " pieces");
    });
}

void setup_render(CLI::App& app) {
    auto cmd = app.add_subcommand("render", "Render the signal with overlays to SVG");
    auto signal = std::make_shared<std::string>();
    auto regions_file = std::make_shared<std::string>();
    auto labels_file = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    auto spec = std::make_shared<molehill::RenderSpec>();
    cmd->add_option("--signal", *signal, "signal csv")->required();
    cmd->add_option("--regions", *regions_file, "regions json from `detect`");
    cmd->add_option("--labels", *labels_file, "labels json from `label`");
    cmd->add_option("--out", *out, "output svg")->required();
    cmd->add_option("--width", spec->width)->capture_default_str();
    cmd->add_option("--height", spec->height)->capture_default_str();
    cmd->add_option("--margin", spec->margin)->capture_default_str();
    cmd->callback([signal, regions_file, labels_file, out, spec] {
        const auto sig = molehill::load_signal_csv(*signal);
        std::vector<molehill::LabeledRegion> regions;
        if (!regions_file->empty()) regions = molehill::regions_from_json(read_json(*regions_file));
        std::vector<molehill::SlopeLabel> labels;
        if (!labels_file->empty()) labels = molehill::labels_from_json(read_json(*labels_file));
        write_text(molehill::render_svg(sig, regions, labels, *spec), *out);
    });
}

void setup_prompt(CLI::App& app) {
    auto cmd = app.add_subcommand("prompt", "Render (and optionally send) LLM prompts");
    auto regions_file = std::make_shared<std::string>();
    auto symbol = std::make_shared<std::string>();
    auto send = std::make_shared<bool>(false);
    auto out = std::make_shared<std::string>();
    auto timeout_ms = std::make_shared<long>(30000);
    auto retries = std::make_shared<int>(0);
    cmd->add_option("--region,--regions", *regions_file, "regions json from `detect`")
        ->required();
    cmd->add_option("--symbol", *symbol, "stock symbol for the templates")->required();
    cmd->add_flag("--send", *send, "send prompts via MOLEHILL_LLM_* transport");
    cmd->add_option("--out", *out, "output json (default stdout)");
    cmd->add_option("--timeout-ms", *timeout_ms, "per-request deadline")->capture_default_str();
    cmd->add_option("--retries", *retries, "extra attempts on failure")->capture_default_str();
    cmd->callback([regions_file, symbol, send, out, timeout_ms, retries] {
        const auto regions = molehill::regions_from_json(read_json(*regions_file));
        std::unique_ptr<molehill::Transport> transport;
        molehill::QueryOptions query_options;
        query_options.timeout = std::chrono::milliseconds(*timeout_ms);
        query_options.retries = *retries;
        if (*send) transport = molehill::make_http_transport(molehill::http_config_from_env());

        auto rows = json::array();
        for (const auto& region : regions) {
            molehill::FeatureContext ctx;
            ctx.symbol = *symbol;
            ctx.label = region.words.front().word;
            ctx.start_date = molehill::date_from_decimal_year(region.x_start);
            ctx.end_date = molehill::date_from_decimal_year(region.x_end);

            const std::string feature_prompt = molehill::render_feature_prompt(ctx);
            const std::string resources_prompt = molehill::render_resources_prompt(ctx);
            json row = {{"label", ctx.label},
                        {"start_date", iso_date(ctx.start_date)},
                        {"end_date", iso_date(ctx.end_date)},
                        {"feature_prompt", feature_prompt},
                        {"resources_prompt", resources_prompt}};
            if (transport) {
                row["feature_reply"] = molehill::query(*transport, feature_prompt, query_options);
                const std::string reply =
                    molehill::query(*transport, resources_prompt, query_options);
                try {
                    auto links = json::array();
                    for (const auto& link : molehill::parse_resources(reply))
                        links.push_back({{"name", link.name}, {"url", link.url}});
                    row["resources"] = links;
                } catch (const molehill::DataError& e) {
                    row["resources_reply"] = reply;
                    row["resources_error"] = e.what();
                }
            }
            rows.push_back(std::move(row));
        }
        emit_json(rows, *out);
    });
}

void setup_pipeline(CLI::App& app) {
    auto cmd = app.add_subcommand(
        "pipeline", "generate -> ingest -> analyze -> detect -> label -> render");
    auto seed = std::make_shared<std::uint64_t>(1);
    auto count = std::make_shared<int>(16);
    auto annotations = std::make_shared<std::string>();
    auto lexicon = std::make_shared<std::string>();
    auto signal_file = std::make_shared<std::string>();
    auto epsilon = std::make_shared<double>(0.05);
    auto slope_window = std::make_shared<double>(0.5);
    auto outdir = std::make_shared<std::string>();
    auto flags = std::make_shared<DetectFlags>();
    cmd->add_option("--seed", *seed)->capture_default_str();
    cmd->add_option("--count", *count)->capture_default_str();
    cmd->add_option("--annotations", *annotations, "annotations csv against the generated charts")
        ->required();
    cmd->add_option("--lexicon", *lexicon, "word,pos lexicon csv")->required();
    cmd->add_option("--signal", *signal_file,
                    "unlabeled signal csv (default: first generated chart)");
    cmd->add_option("--epsilon", *epsilon, "RDP tolerance for labeling")->capture_default_str();
    cmd->add_option("--slope-window", *slope_window)->capture_default_str();
    cmd->add_option("--outdir", *outdir, "artifact directory")->required();
    flags->attach(cmd, false);
    cmd->callback([seed, count, annotations, lexicon, signal_file, epsilon, slope_window, outdir,
                   flags] {
        const fs::path dir = *outdir;
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw molehill::DataError("cannot create outdir: " + dir.string());

        auto charts = molehill::generate_batch(*seed, *count);
        molehill::save_charts(charts, dir / "charts.json");
        note("generated " + std::to_string(charts.size()) + " charts");

        const auto ds = molehill::make_dataset(
            charts, molehill::load_annotations_csv(*annotations),
            molehill::load_lexicon(*lexicon), {});
        molehill::save_dataset(ds, dir / "dataset.json");

        const auto analysis = molehill::analyze(ds);
        emit_json(molehill::analysis_to_json(analysis), (dir / "stats.json").string());

        molehill::Signal sig;
        if (signal_file->empty()) {
            sig = ds.charts.begin()->second.unscaled_signal();
            note("no --signal given; using " + ds.charts.begin()->first);
        } else {
            sig = molehill::load_signal_csv(*signal_file);
        }
        molehill::save_signal_csv(sig, dir / "signal.csv");

        const auto regions = flags->run(sig, ds);
        emit_json(molehill::regions_to_json(regions), (dir / "regions.json").string());
        note("detected " + std::to_string(regions.size()) + " regions");

        const auto labels =
            molehill::label_slopes(sig, analysis.pair_table, *epsilon, *slope_window);
        emit_json(molehill::labels_to_json(labels, sig), (dir / "labels.json").string());

        write_text(molehill::render_svg(sig, regions, labels, {}),
                   dir / "chart.svg");
        std::cout << "pipeline artifacts in " << dir.string() << '\n';
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantified semantic labeling of visual features in line charts"};
    app.require_subcommand(1);
    app.add_flag("-v,--verbose", g_verbose, "progress notes on stderr");

    setup_generate(app);
    setup_metrics(app);
    setup_ingest(app);
    setup_analyze(app);
    setup_detect(app);
    setup_label(app);
    setup_render(app);
    setup_prompt(app);
    setup_pipeline(app);

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const molehill::TransportError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const molehill::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
