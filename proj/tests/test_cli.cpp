#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "mcast/io_util.hpp"
#include "mcast/synth.hpp"

using namespace mcast;
namespace fs = std::filesystem;

namespace {

std::string binary() {
    const char* b = std::getenv("MACROCAST_BIN");
    REQUIRE_MESSAGE(b != nullptr, "MACROCAST_BIN must point at the CLI binary");
    return b;
}

int run(const std::string& args) {
    std::string cmd = binary() + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

// Synthetic data files plus a config; everything lives under `root`.
struct Env {
    std::string root;
    std::string config_path;

    explicit Env(const std::string& name) {
        root = (fs::temp_directory_path() / "mcast_cli_tests" / name).string();
        fs::remove_all(root);
        fs::create_directories(root);
        auto specs = default_regime_specs();
        auto schedule = default_schedule(400);
        SyntheticDataset ds = generate(specs, schedule, 400, 11);
        SyntheticFiles files = write_dataset_files(ds, root + "/data");

        std::string macro_items, lag_items;
        for (const auto& [id, path] : files.macro_csv) {
            macro_items += (macro_items.empty() ? "" : "; ") + id + ":" + path;
            lag_items += (lag_items.empty() ? "" : "; ") + id + ":0";
        }
        std::string cfg =
            "[data]\n"
            "price_csv = " + files.price_csv + "\n"
            "embeddings_file = " + files.embeddings_file + "\n"
            "sentiment_csv = " + files.sentiment_csv + "\n"
            "macro_series = " + macro_items + "\n"
            "macro_lags = " + lag_items + "\n"
            "[features]\n"
            "sentiment_columns = synth_sent\n"
            "[windows]\n"
            "train_begin = " + ds.days.front().date.to_string() + "\n"
            "train_end = " + ds.days[299].date.to_string() + "\n"
            "ood_begin = " + ds.days[300].date.to_string() + "\n"
            "ood_end = " + ds.days.back().date.to_string() + "\n"
            "[run]\n"
            "preset = macro-retrieval\n"
            "output_dir = " + root + "/out\n";
        config_path = root + "/run.cfg";
        write_file(config_path, cfg);
    }
};

} // namespace

TEST_CASE("ingest, freeze, evaluate-ood, diagnose: full run") {
    Env env("full");
    std::string c = "--config " + env.config_path + " ";
    CHECK(run(c + "ingest") == 0);
    CHECK(fs::exists(env.root + "/out/aligned.csv"));
    CHECK(fs::exists(env.root + "/out/ingest_report.json"));
    CHECK(run(c + "freeze") == 0);
    CHECK(fs::exists(env.root + "/out/macro-retrieval.bundle.json"));
    CHECK(fs::exists(env.root + "/out/macro-retrieval.index"));
    CHECK(fs::exists(env.root + "/out/macro-retrieval.cv.json"));
    CHECK(run(c + "evaluate-ood") == 0);
    CHECK(fs::exists(env.root + "/out/macro-retrieval.ood.json"));
    CHECK(run(c + "diagnose") == 0);
    std::string diag = read_file(env.root + "/out/macro-retrieval.neighbors.csv");
    CHECK(diag.substr(0, diag.find('\n')) ==
          "query_date,neighbor_date,rank,sim_joint,sim_text,macro_L2");
    CHECK(run(c + "export-embeddings") == 0);
    CHECK(fs::exists(env.root + "/out/macro-retrieval.embeddings.csv"));
    CHECK(run(c + "cv") == 0);
}

TEST_CASE("missing inputs exit with code 2") {
    Env env("missing");
    // evaluate before ingest: aligned file does not exist yet
    CHECK(run("--config " + env.config_path + " cv") == 2);
    // price csv removed
    fs::remove(fs::path(env.root) / "data" / "prices.csv");
    CHECK(run("--config " + env.config_path + " ingest") == 2);
}

TEST_CASE("overlapping OOD window exits with code 3") {
    Env env("overlap");
    std::string c = "--config " + env.config_path + " ";
    REQUIRE(run(c + "ingest") == 0);
    REQUIRE(run(c + "freeze") == 0);
    // rewrite the config so the OOD window reaches back into training
    std::string cfg = read_file(env.config_path);
    auto pos = cfg.find("ood_begin = ");
    auto eol = cfg.find('\n', pos);
    cfg.replace(pos, eol - pos, "ood_begin = 2015-06-01");
    write_file(env.config_path, cfg);
    CHECK(run(c + "evaluate-ood") == 3);
}

TEST_CASE("invalid config exits with code 1") {
    Env env("badcfg");
    write_file(env.config_path, "[data]\nbogus_key = 1\n");
    CHECK(run("--config " + env.config_path + " ingest") == 1);
}

TEST_CASE("reruns are byte-identical") {
    Env env("determinism");
    std::string c = "--config " + env.config_path + " ";
    REQUIRE(run(c + "ingest") == 0);
    REQUIRE(run(c + "freeze") == 0);
    REQUIRE(run(c + "evaluate-ood") == 0);
    REQUIRE(run(c + "diagnose") == 0);

    fs::path out(env.root + "/out"), keep(env.root + "/first");
    fs::create_directories(keep);
    for (const char* f : {"aligned.csv", "macro-retrieval.bundle.json", "macro-retrieval.index",
                          "macro-retrieval.cv.json", "macro-retrieval.ood.json",
                          "macro-retrieval.neighbors.csv"}) {
        fs::copy_file(out / f, keep / f);
    }
    fs::remove_all(out);
    REQUIRE(run(c + "ingest") == 0);
    REQUIRE(run(c + "freeze") == 0);
    REQUIRE(run(c + "evaluate-ood") == 0);
    REQUIRE(run(c + "diagnose") == 0);
    for (const char* f : {"aligned.csv", "macro-retrieval.bundle.json", "macro-retrieval.index",
                          "macro-retrieval.cv.json", "macro-retrieval.ood.json",
                          "macro-retrieval.neighbors.csv"}) {
        CHECK_MESSAGE(read_file((out / f).string()) == read_file((keep / f).string()), f);
    }
}

TEST_CASE("synth-experiment runs all presets and reports the ordering") {
    std::string out = (fs::temp_directory_path() / "mcast_cli_tests" / "synthexp").string();
    fs::remove_all(out);
    CHECK(run("synth-experiment --seed 7 --days 600 --out " + out) == 0);
    CHECK(fs::exists(out + "/deltas.csv"));
    for (const char* p :
         {"numeric-only", "text-only", "multimodal", "text-retrieval", "macro-retrieval"}) {
        CHECK(fs::exists(out + "/" + std::string(p) + ".cv.json"));
        CHECK(fs::exists(out + "/" + std::string(p) + ".ood.json"));
    }
}
