#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "mcast/errors.hpp"
#include "mcast/io_util.hpp"
#include "mcast/pipeline.hpp"
#include "mcast/synth.hpp"

using namespace mcast;
namespace fs = std::filesystem;

namespace {

// One shared synthetic run: files on disk plus the matching config.
struct Env {
    RunConfig cfg;
    AlignedDataset ds;
    std::string dir;

    Env() {
        dir = (fs::temp_directory_path() / "mcast_pipeline_tests").string();
        fs::create_directories(dir);
        auto specs = default_regime_specs();
        auto schedule = default_schedule(400);
        SyntheticDataset synth = generate(specs, schedule, 400, 11);
        SyntheticFiles files = write_dataset_files(synth, dir + "/data");

        std::size_t shift_begin = 300; // last quarter of 400
        cfg.price_csv = files.price_csv;
        cfg.embeddings_file = files.embeddings_file;
        cfg.sentiment_csv = files.sentiment_csv;
        cfg.macro_csv = files.macro_csv;
        cfg.features.sentiment_columns = {"synth_sent"};
        cfg.has_windows = true;
        cfg.has_ood = true;
        cfg.train_begin = synth.days.front().date;
        cfg.train_end = synth.days[shift_begin - 1].date;
        cfg.ood_begin = synth.days[shift_begin].date;
        cfg.ood_end = synth.days.back().date;
        cfg.output_dir = dir;
        cfg.aligned_file = dir + "/aligned.csv";

        ds = ingest(cfg).dataset;
    }
};

Env& env() {
    static Env e;
    return e;
}

} // namespace

TEST_CASE("ingest produces a usable aligned dataset") {
    const auto& ds = env().ds;
    CHECK(ds.records.size() > 300);
    CHECK(ds.text_dim == 8);
    CHECK(ds.macro_dim == 4);
    for (std::size_t i = 1; i < ds.records.size(); ++i) {
        CHECK(ds.records[i - 1].date < ds.records[i].date);
    }
}

TEST_CASE("feature matrices have the preset-specific layout") {
    const auto& e = env();
    auto train = slice_window(e.ds, e.cfg.train_begin, e.cfg.train_end);
    Scalers sc = fit_scalers(e.ds, e.cfg.train_begin, e.cfg.train_end);
    int n_num = e.ds.num_dim, d = e.ds.text_dim, p = e.ds.macro_dim;

    auto dims = [&](Preset preset, const CausalIndex* idx) {
        RunConfig c = e.cfg;
        c.preset = preset;
        FeatureMatrix fm = build_features(train, preset, sc, idx, c.k);
        return fm.rows.front().size();
    };
    CausalIndex index = build_index(train, sc.macro, 0.5);
    CHECK(dims(Preset::NumericOnly, nullptr) == std::size_t(n_num));
    CHECK(dims(Preset::TextOnly, nullptr) == std::size_t(d));
    CHECK(dims(Preset::MultimodalNoRetrieval, nullptr) == std::size_t(n_num + d + p));
    CHECK(dims(Preset::TextRetrieval, &index) == std::size_t(n_num + d));
    CHECK(dims(Preset::MacroRetrieval, &index) == std::size_t(n_num + d));
}

TEST_CASE("rows without history get zero memory and are counted") {
    const auto& e = env();
    auto train = slice_window(e.ds, e.cfg.train_begin, e.cfg.train_end);
    Scalers sc = fit_scalers(e.ds, e.cfg.train_begin, e.cfg.train_end);
    CausalIndex index = build_index(train, sc.macro, 0.5);
    FeatureMatrix fm = build_features(train, Preset::MacroRetrieval, sc, &index, 5);
    CHECK(fm.empty_retrieval >= 1); // at least the first row
    // the first row's contextual-memory block is all zeros
    for (std::size_t i = fm.rows[0].size() - e.ds.text_dim; i < fm.rows[0].size(); ++i) {
        CHECK(fm.rows[0][i] == 0.0);
    }
}

TEST_CASE("causality: deleting future rows does not change a day's features") {
    const auto& e = env();
    auto train = slice_window(e.ds, e.cfg.train_begin, e.cfg.train_end);
    Scalers sc = fit_scalers(e.ds, e.cfg.train_begin, e.cfg.train_end);
    CausalIndex full_index = build_index(train, sc.macro, 0.5);
    FeatureMatrix full = build_features(train, Preset::MacroRetrieval, sc, &full_index, 5);

    std::mt19937 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t cut = 50 + rng() % (train.size() - 60);
        std::vector<AlignedRecord> prefix(train.begin(), train.begin() + cut + 1);
        CausalIndex prefix_index = build_index(prefix, sc.macro, 0.5);
        FeatureMatrix part = build_features(prefix, Preset::MacroRetrieval, sc, &prefix_index, 5);
        // the day at `cut` must be unchanged by everything after it
        CHECK(part.rows[cut] == full.rows[cut]);
        CHECK(part.labels[cut] == full.labels[cut]);
    }
}

TEST_CASE("cv report pools five folds of test predictions") {
    const auto& e = env();
    RunConfig cfg = e.cfg;
    cfg.preset = Preset::NumericOnly;
    auto train = slice_window(e.ds, cfg.train_begin, cfg.train_end);
    Scalers sc = fit_scalers(e.ds, cfg.train_begin, cfg.train_end);
    EvaluationReport rep = run_cv(train, cfg, sc, nullptr);
    CHECK(rep.phase == "cv");
    CHECK(rep.preset == "numeric-only");
    // five folds of floor(n/6) rows each
    CHECK(rep.n_samples == static_cast<int>(train.size() / 6) * 5);
    CHECK(rep.config_hash == cfg.hash());
}

TEST_CASE("freeze/load bundle round trip, tampering rejected") {
    const auto& e = env();
    RunConfig cfg = e.cfg;
    cfg.preset = Preset::MacroRetrieval;
    std::string bpath = e.dir + "/t.bundle.json", ipath = e.dir + "/t.index";
    FrozenBundle b = freeze(e.ds, cfg, bpath, ipath);
    CHECK(b.preset == Preset::MacroRetrieval);
    CHECK(!b.index_path.empty());
    CHECK(fs::exists(bpath + ".trainlog.csv"));

    FrozenBundle back = load_bundle(bpath);
    CHECK(back.params.weights == b.params.weights);
    CHECK(back.params.bias == b.params.bias);
    CHECK(back.train_end == b.train_end);
    CHECK(back.index_checksum == b.index_checksum);
    CHECK(back.cv_report.classification.f1 == b.cv_report.classification.f1);

    std::string body = read_file(bpath);
    auto pos = body.find("\"bias\"");
    REQUIRE(pos != std::string::npos);
    body.replace(pos, 6, "\"bais\"");
    write_file(bpath, body);
    CHECK_THROWS_AS(load_bundle(bpath), ProtocolError);
}

TEST_CASE("evaluate_ood rejects windows overlapping the train span") {
    const auto& e = env();
    RunConfig cfg = e.cfg;
    cfg.preset = Preset::NumericOnly;
    FrozenBundle b = freeze(e.ds, cfg, e.dir + "/o.bundle.json", e.dir + "/o.index");
    // feed train rows as "OOD"
    auto overlap = slice_window(e.ds, cfg.train_begin, cfg.train_end);
    CHECK_THROWS_AS(evaluate_ood(b, overlap, cfg), ProtocolError);
}

TEST_CASE("evaluate_ood leaves the frozen artifacts untouched") {
    const auto& e = env();
    RunConfig cfg = e.cfg;
    cfg.preset = Preset::MacroRetrieval;
    std::string bpath = e.dir + "/f.bundle.json", ipath = e.dir + "/f.index";
    FrozenBundle b = freeze(e.ds, cfg, bpath, ipath);
    std::string bundle_before = read_file(bpath), index_before = read_file(ipath);
    auto ood = slice_window(e.ds, cfg.ood_begin, cfg.ood_end);
    EvaluationReport rep = evaluate_ood(b, ood, cfg);
    CHECK(read_file(bpath) == bundle_before);
    CHECK(read_file(ipath) == index_before);
    CHECK(rep.phase == "ood");
    CHECK(rep.has_deltas);
    CHECK(rep.deltas.delta_f1 ==
          doctest::Approx(b.cv_report.classification.f1 - rep.classification.f1));
    CHECK(rep.n_samples == static_cast<int>(ood.size()));
}

TEST_CASE("diagnose emits K rows per query in rank order") {
    const auto& e = env();
    RunConfig cfg = e.cfg;
    cfg.preset = Preset::MacroRetrieval;
    FrozenBundle b = freeze(e.ds, cfg, e.dir + "/d.bundle.json", e.dir + "/d.index");
    auto ood = slice_window(e.ds, cfg.ood_begin, cfg.ood_end);
    std::vector<AlignedRecord> queries(ood.begin(), ood.begin() + 3);
    auto rows = diagnose(b, queries);
    CHECK(rows.size() == 3 * 5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].rank == static_cast<int>(i % 5) + 1);
        CHECK(rows[i].neighbor_date < rows[i].query_date);
        // neighbors come from the frozen train-window index only
        CHECK(rows[i].neighbor_date <= b.train_end);
    }
}

TEST_CASE("embedding export tags index rows train and the rest query") {
    const auto& e = env();
    RunConfig cfg = e.cfg;
    cfg.preset = Preset::MacroRetrieval;
    FrozenBundle b = freeze(e.ds, cfg, e.dir + "/x.bundle.json", e.dir + "/x.index");
    CausalIndex index = load_index(b.index_path);
    auto ood = slice_window(e.ds, cfg.ood_begin, cfg.ood_end);
    std::string csv = embedding_export_csv(index, ood, b.alpha, b.scalers.macro);
    std::size_t trains = 0, queries = 0, lines = 0;
    for (std::size_t pos = 0; (pos = csv.find('\n', pos)) != std::string::npos; ++pos) ++lines;
    for (std::size_t pos = 0; (pos = csv.find(",train,", pos)) != std::string::npos; ++pos)
        ++trains;
    for (std::size_t pos = 0; (pos = csv.find(",query,", pos)) != std::string::npos; ++pos)
        ++queries;
    CHECK(trains == index.entries.size());
    CHECK(queries == ood.size());
    CHECK(lines == trains + queries + 1); // header
}
