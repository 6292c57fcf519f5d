#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <string>
#include <thread>

#include <sys/wait.h>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "support.hpp"

// Black-box tests of the installed command line: exit codes, file artifacts,
// and agreement with the committed golden outputs.

namespace {

using nlohmann::json;

std::string cli() { return MOLEHILL_CLI_PATH; }

int run(const std::string& args, const std::string& env = "") {
    std::string cmd;
    if (!env.empty()) cmd += env + " ";
    cmd += cli() + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

json read_json(const std::filesystem::path& file) {
    return json::parse(testsupport::slurp(file));
}

std::string data(const char* name) { return (testsupport::data_dir() / name).string(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 1, help with 0") {
    CHECK(run("") == 1);
    CHECK(run("no-such-command") == 1);
    CHECK(run("generate") == 1);                        // --out is required
    CHECK(run("generate --out x.json --bogus-flag") == 1);
    CHECK(run("--help") == 0);
    for (const char* sub : {"generate", "metrics", "ingest", "analyze", "detect", "label",
                            "render", "prompt", "pipeline"}) {
        CAPTURE(sub);
        CHECK(run(std::string(sub) + " --help") == 0);
    }
}

TEST_CASE("missing and malformed inputs exit with 2") {
    const auto dir = testsupport::scratch_dir("cli-errs");
    CHECK(run("analyze --dataset " + (dir / "absent.json").string() + " --out " +
              (dir / "out.json").string()) == 2);
    CHECK(run("metrics --charts " + (dir / "absent.json").string()) == 2);

    testsupport::spit(dir / "bad.csv", "not,a,real,header\n");
    CHECK(run("ingest --charts " + data("charts.json") + " --annotations " +
              (dir / "bad.csv").string() + " --lexicon " + data("lexicon.csv") + " --out " +
              (dir / "ds.json").string()) == 2);

    testsupport::spit(dir / "raw.csv", "1960,1\n1961,2\n");  // headerless signal
    CHECK(run("label --signal " + (dir / "raw.csv").string() + " --stats " +
              data("golden_stats.json") + " --epsilon 0.05 --out " +
              (dir / "labels.json").string()) == 2);
}

TEST_CASE("generate is deterministic and honors the count") {
    const auto dir = testsupport::scratch_dir("cli-gen");
    CHECK(run("generate --seed 7 --count 5 --out " + (dir / "a.json").string()) == 0);
    CHECK(run("generate --seed 7 --count 5 --out " + (dir / "b.json").string()) == 0);
    CHECK(testsupport::slurp(dir / "a.json") == testsupport::slurp(dir / "b.json"));
    CHECK(read_json(dir / "a.json").size() == 5);

    // The default seed and count reproduce the committed charts.
    CHECK(run("generate --out " + (dir / "default.json").string()) == 0);
    CHECK(testsupport::slurp(dir / "default.json") == testsupport::slurp(data("charts.json")));
}

TEST_CASE("the full toolchain matches the committed goldens") {
    const auto dir = testsupport::scratch_dir("cli-chain");
    const std::string ds = (dir / "dataset.bin").string();  // binary path on purpose

    CHECK(run("ingest --charts " + data("charts.json") + " --annotations " +
              data("annotations.csv") + " --lexicon " + data("lexicon.csv") + " --out " + ds) ==
          0);

    CHECK(run("analyze --dataset " + ds + " --out " + (dir / "stats.json").string() +
              " --newick " + (dir / "tree.nwk").string()) == 0);
    CHECK(testsupport::slurp(dir / "stats.json") == testsupport::slurp(data("golden_stats.json")));
    const std::string newick = testsupport::slurp(dir / "tree.nwk");
    CHECK(newick.find(';') != std::string::npos);

    CHECK(run("detect --signal " + data("signal.csv") + " --dataset " + ds + " --out " +
              (dir / "regions.json").string()) == 0);
    CHECK(testsupport::slurp(dir / "regions.json") ==
          testsupport::slurp(data("golden_regions.json")));

    CHECK(run("label --signal " + data("signal.csv") + " --stats " +
              (dir / "stats.json").string() + " --epsilon 0.05 --out " +
              (dir / "labels.json").string()) == 0);
    CHECK(testsupport::slurp(dir / "labels.json") ==
          testsupport::slurp(data("golden_labels.json")));

    CHECK(run("render --signal " + data("signal.csv") + " --regions " +
              (dir / "regions.json").string() + " --labels " + (dir / "labels.json").string() +
              " --out " + (dir / "chart.svg").string()) == 0);
    CHECK(testsupport::slurp(dir / "chart.svg") == testsupport::slurp(data("golden_chart.svg")));

    CHECK(run("prompt --region " + (dir / "regions.json").string() + " --symbol ALK --out " +
              (dir / "prompts.json").string()) == 0);
    const json prompts = read_json(dir / "prompts.json");
    REQUIRE(prompts.is_array());
    REQUIRE_FALSE(prompts.empty());
    for (const auto& row : prompts) {
        const auto feature = row.at("feature_prompt").get<std::string>();
        CHECK(feature.rfind("What happened between ", 0) == 0);
        CHECK(feature.find("stock symbol ALK") != std::string::npos);
        CHECK(row.at("resources_prompt").get<std::string>().find("should for formatted") !=
              std::string::npos);
        CHECK_FALSE(row.contains("resources"));  // nothing sent without --send
    }

    CHECK(run("metrics --charts " + data("charts.json") + " --dataset " + ds + " --out " +
              (dir / "metrics.json").string()) == 0);
    const json metrics = read_json(dir / "metrics.json");
    CHECK(metrics.at("charts").size() == 16);
    CHECK(metrics.at("saturation").size() == 572);
}

TEST_CASE("the pipeline command reproduces every artifact in one go") {
    const auto dir = testsupport::scratch_dir("cli-pipe");
    CHECK(run("pipeline --annotations " + data("annotations.csv") + " --lexicon " +
              data("lexicon.csv") + " --outdir " + dir.string()) == 0);
    CHECK(testsupport::slurp(dir / "charts.json") == testsupport::slurp(data("charts.json")));
    CHECK(testsupport::slurp(dir / "signal.csv") == testsupport::slurp(data("signal.csv")));
    CHECK(testsupport::slurp(dir / "stats.json") == testsupport::slurp(data("golden_stats.json")));
    CHECK(testsupport::slurp(dir / "regions.json") ==
          testsupport::slurp(data("golden_regions.json")));
    CHECK(testsupport::slurp(dir / "labels.json") ==
          testsupport::slurp(data("golden_labels.json")));
    CHECK(testsupport::slurp(dir / "chart.svg") == testsupport::slurp(data("golden_chart.svg")));
}

TEST_CASE("render options reshape the canvas") {
    const auto dir = testsupport::scratch_dir("cli-render");
    CHECK(run("render --signal " + data("signal.csv") + " --out " + (dir / "bare.svg").string() +
              " --width 400 --height 200") == 0);
    const std::string svg = testsupport::slurp(dir / "bare.svg");
    CHECK(svg.find("width=\"400.00\" height=\"200.00\"") != std::string::npos);
    CHECK(svg.find("<rect") == std::string::npos);

    CHECK(run("render --signal " + data("signal.csv") + " --out " + (dir / "tiny.svg").string() +
              " --width 10") == 2);
}

TEST_CASE("prompt --send talks to the configured endpoint") {
    const std::string listing =
        testsupport::slurp(testsupport::fixture_dir() / "resources_reply.txt");
    httplib::Server server;
    server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        const json out = {
            {"choices",
             json::array({{{"message", {{"role", "assistant"}, {"content", listing}}}}})}};
        res.set_content(out.dump(), "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread runner([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    const auto dir = testsupport::scratch_dir("cli-send");
    CHECK(run("prompt --region " + data("golden_regions.json") + " --symbol AMGN --send --out " +
              (dir / "sent.json").string(),
              "MOLEHILL_LLM_URL=http://127.0.0.1:" + std::to_string(port)) == 0);
    const json sent = read_json(dir / "sent.json");
    REQUIRE_FALSE(sent.empty());
    for (const auto& row : sent) {
        CHECK(row.at("feature_reply").get<std::string>() == listing);
        REQUIRE(row.contains("resources"));
        CHECK(row.at("resources").size() == 5);
        CHECK(row.at("resources")[0].at("name") == "AMGN Stock Price History");
    }

    server.stop();
    runner.join();

    // With the server gone the same invocation is a transport failure.
    CHECK(run("prompt --region " + data("golden_regions.json") + " --symbol AMGN --send --out " +
              (dir / "fail.json").string(),
              "MOLEHILL_LLM_URL=http://127.0.0.1:" + std::to_string(port)) == 3);
    CHECK(run("prompt --region " + data("golden_regions.json") + " --symbol AMGN --send --out " +
              (dir / "fail2.json").string()) == 3);  // MOLEHILL_LLM_URL unset
}

}  // TEST_SUITE
