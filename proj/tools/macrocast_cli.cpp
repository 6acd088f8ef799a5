// macrocast: end-to-end driver for the retrieval-augmented forecasting
// pipeline. Subcommands mirror the stages: ingest -> cv / freeze ->
// evaluate-ood / diagnose / export-embeddings, plus the synthetic
// regime-shift experiment.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcast/config.hpp"
#include "mcast/errors.hpp"
#include "mcast/io_util.hpp"
#include "mcast/pipeline.hpp"
#include "mcast/report.hpp"
#include "mcast/retrieval.hpp"
#include "mcast/synth.hpp"

namespace fs = std::filesystem;
using namespace mcast;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::string output_dir; // overrides [run] output_dir when set
    std::optional<std::uint64_t> seed;
};

RunConfig load_run_config(const GlobalOpts& g) {
    if (g.config_path.empty())
        throw ValidationError("--config is required for this subcommand");
    RunConfig cfg = load_config(g.config_path);
    if (!g.output_dir.empty()) cfg.output_dir = g.output_dir;
    if (g.seed) cfg.train.seed = *g.seed;
    if (cfg.aligned_file.empty()) cfg.aligned_file = cfg.output_dir + "/aligned.csv";
    return cfg;
}

std::string bundle_path(const RunConfig& cfg) {
    return cfg.output_dir + "/" + preset_name(cfg.preset) + ".bundle.json";
}
std::string index_path(const RunConfig& cfg) {
    return cfg.output_dir + "/" + preset_name(cfg.preset) + ".index";
}

AlignedDataset load_aligned_or_fail(const RunConfig& cfg) {
    if (!fs::exists(cfg.aligned_file))
        throw MissingInputError("aligned dataset not found: " + cfg.aligned_file +
                                " (run `macrocast ingest` first)");
    return load_aligned(cfg.aligned_file);
}

void require_windows(const RunConfig& cfg) {
    if (!cfg.has_windows)
        throw ValidationError("config must set [windows] train_begin/train_end");
}
void require_ood(const RunConfig& cfg) {
    if (!cfg.has_ood)
        throw ValidationError("config must set [windows] ood_begin/ood_end");
}

int cmd_ingest(const GlobalOpts& g) {
    RunConfig cfg = load_run_config(g);
    require_windows(cfg);
    fs::create_directories(cfg.output_dir);
    IngestResult r = ingest(cfg);
    save_aligned(r.dataset, cfg.aligned_file);

    nlohmann::ordered_json j;
    j["schema"] = "mcast-ingest v1";
    j["aligned_file"] = cfg.aligned_file;
    j["rows"] = r.dataset.records.size();
    j["first_date"] = r.dataset.records.front().date.to_string();
    j["last_date"] = r.dataset.records.back().date.to_string();
    j["dropped_non_business"] = r.non_business_rows;
    j["dropped_missing_embedding"] = r.report.dropped_missing_embedding;
    j["dropped_missing_macro"] = r.report.dropped_missing_macro;
    j["dropped_missing_numeric"] = r.report.dropped_missing_numeric;
    j["dropped_missing_label"] = r.report.dropped_missing_label;
    j["config_hash"] = cfg.hash();
    write_file(cfg.output_dir + "/ingest_report.json", j.dump(2) + "\n");

    std::cout << "ingest: " << r.dataset.records.size() << " aligned rows -> " << cfg.aligned_file
              << "\n";
    return 0;
}

int cmd_cv(const GlobalOpts& g) {
    RunConfig cfg = load_run_config(g);
    require_windows(cfg);
    fs::create_directories(cfg.output_dir);
    AlignedDataset ds = load_aligned_or_fail(cfg);
    std::vector<AlignedRecord> train = slice_window(ds, cfg.train_begin, cfg.train_end);
    if (train.empty()) throw ValidationError("train window selects no aligned rows");

    Scalers scalers = fit_scalers(ds, cfg.train_begin, cfg.train_end);
    CausalIndex index;
    const CausalIndex* index_ptr = nullptr;
    if (cfg.preset == Preset::TextRetrieval || cfg.preset == Preset::MacroRetrieval) {
        index = build_index(train, scalers.macro, cfg.effective_alpha());
        index_ptr = &index;
    }
    EvaluationReport rep = run_cv(train, cfg, scalers, index_ptr);
    std::string path = cfg.output_dir + "/" + preset_name(cfg.preset) + ".cv.json";
    save_report(rep, path);
    std::printf("cv %s: n=%d acc=%.4f f1=%.4f auroc=%.4f sharpe=%.4f -> %s\n",
                rep.preset.c_str(), rep.n_samples, rep.classification.accuracy,
                rep.classification.f1, rep.classification.auroc, rep.financial.sharpe_252,
                path.c_str());
    return 0;
}

int cmd_freeze(const GlobalOpts& g) {
    RunConfig cfg = load_run_config(g);
    require_windows(cfg);
    fs::create_directories(cfg.output_dir);
    AlignedDataset ds = load_aligned_or_fail(cfg);
    FrozenBundle b = freeze(ds, cfg, bundle_path(cfg), index_path(cfg));
    save_report(b.cv_report, cfg.output_dir + "/" + preset_name(cfg.preset) + ".cv.json");
    std::cout << "freeze " << preset_name(cfg.preset) << ": bundle -> " << bundle_path(cfg);
    if (!b.index_path.empty()) std::cout << ", index -> " << b.index_path;
    std::cout << "\n";
    return 0;
}

int cmd_evaluate_ood(const GlobalOpts& g, const std::string& bundle_override) {
    RunConfig cfg = load_run_config(g);
    require_windows(cfg);
    require_ood(cfg);
    fs::create_directories(cfg.output_dir);
    std::string bpath = bundle_override.empty() ? bundle_path(cfg) : bundle_override;
    FrozenBundle b = load_bundle(bpath);
    AlignedDataset ds = load_aligned_or_fail(cfg);
    std::vector<AlignedRecord> ood = slice_window(ds, cfg.ood_begin, cfg.ood_end);
    if (ood.empty()) throw ValidationError("OOD window selects no aligned rows");

    EvaluationReport rep = evaluate_ood(b, ood, cfg);
    std::string path = cfg.output_dir + "/" + preset_name(cfg.preset) + ".ood.json";
    save_report(rep, path);
    std::printf("ood %s: n=%d acc=%.4f f1=%.4f dF1=%.4f dSharpe=%.4f -> %s\n", rep.preset.c_str(),
                rep.n_samples, rep.classification.accuracy, rep.classification.f1,
                rep.deltas.delta_f1, rep.deltas.delta_sharpe, path.c_str());
    return 0;
}

int cmd_diagnose(const GlobalOpts& g, const std::string& bundle_override,
                 const std::vector<std::string>& dates) {
    RunConfig cfg = load_run_config(g);
    require_windows(cfg);
    require_ood(cfg);
    fs::create_directories(cfg.output_dir);
    std::string bpath = bundle_override.empty() ? bundle_path(cfg) : bundle_override;
    FrozenBundle b = load_bundle(bpath);
    if (b.index_path.empty())
        throw ValidationError("bundle for preset '" + preset_name(b.preset) +
                              "' has no retrieval index to diagnose");
    AlignedDataset ds = load_aligned_or_fail(cfg);
    std::vector<AlignedRecord> ood = slice_window(ds, cfg.ood_begin, cfg.ood_end);

    std::vector<AlignedRecord> queries;
    if (dates.empty()) {
        queries = ood;
    } else {
        for (const auto& s : dates) {
            Date d = Date::parse(s);
            bool found = false;
            for (const auto& rec : ood)
                if (rec.date == d) {
                    queries.push_back(rec);
                    found = true;
                    break;
                }
            if (!found)
                throw ValidationError("no aligned OOD row for " + s + " (window " +
                                      cfg.ood_begin.to_string() + ".." +
                                      cfg.ood_end.to_string() + ")");
        }
    }
    if (queries.empty()) throw ValidationError("no query dates to diagnose");

    std::vector<RetrievalDiagnostics> rows = diagnose(b, queries);
    std::string path = cfg.output_dir + "/" + preset_name(cfg.preset) + ".neighbors.csv";
    write_file(path, diagnostics_csv(rows));
    std::cout << "diagnose: " << rows.size() << " neighbor rows for " << queries.size()
              << " queries -> " << path << "\n";
    return 0;
}

int cmd_export_embeddings(const GlobalOpts& g, const std::string& bundle_override) {
    RunConfig cfg = load_run_config(g);
    require_windows(cfg);
    require_ood(cfg);
    fs::create_directories(cfg.output_dir);
    std::string bpath = bundle_override.empty() ? bundle_path(cfg) : bundle_override;
    FrozenBundle b = load_bundle(bpath);
    if (b.index_path.empty())
        throw ValidationError("bundle for preset '" + preset_name(b.preset) +
                              "' has no retrieval index to export");
    CausalIndex index = load_index(b.index_path);
    AlignedDataset ds = load_aligned_or_fail(cfg);
    std::vector<AlignedRecord> ood = slice_window(ds, cfg.ood_begin, cfg.ood_end);

    std::string csv = embedding_export_csv(index, ood, b.alpha, b.scalers.macro);
    std::string path = cfg.output_dir + "/" + preset_name(cfg.preset) + ".embeddings.csv";
    write_file(path, csv);
    std::cout << "export-embeddings: " << index.entries.size() << " train + " << ood.size()
              << " query vectors -> " << path << "\n";
    return 0;
}

int cmd_synth(const GlobalOpts& g, std::uint64_t seed, std::size_t n_days,
              std::string out_dir) {
    if (g.seed) seed = *g.seed;
    if (!g.output_dir.empty()) out_dir = g.output_dir;
    fs::create_directories(out_dir);

    auto specs = default_regime_specs();
    auto schedule = default_schedule(n_days);
    SyntheticDataset ds = generate(specs, schedule, n_days, seed);
    RegimeShiftResult res = regime_shift_experiment(ds, out_dir);

    std::printf("%-16s %8s %8s %8s %8s %8s %8s\n", "preset", "cv_acc", "ood_acc", "cv_f1",
                "ood_f1", "dF1", "dSharpe");
    for (const auto& name : {"numeric-only", "text-only", "multimodal", "text-retrieval",
                             "macro-retrieval"}) {
        const auto& cv = res.cv.at(name);
        const auto& ood = res.ood.at(name);
        std::printf("%-16s %8.4f %8.4f %8.4f %8.4f %8.4f %8.4f\n", name,
                    cv.classification.accuracy, ood.classification.accuracy, cv.classification.f1,
                    ood.classification.f1, ood.deltas.delta_f1, ood.deltas.delta_sharpe);
    }

    double macro_acc = res.ood.at("macro-retrieval").classification.accuracy;
    double text_acc = res.ood.at("text-retrieval").classification.accuracy;
    if (macro_acc < text_acc + 0.05) {
        std::cerr << "regime-shift check failed: macro-retrieval OOD accuracy " << macro_acc
                  << " does not beat text-retrieval " << text_acc << " by 0.05\n";
        return 1;
    }
    std::cout << "regime-shift check passed: macro " << macro_acc << " vs text " << text_acc
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"macro-contextual retrieval forecasting toolkit"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "run configuration file");
    app.add_option("--output", g.output_dir, "override output directory");
    app.add_option("--seed", g.seed, "override training / generation seed");

    app.add_subcommand("ingest", "align prices, embeddings, macro series and sentiment");
    app.add_subcommand("cv", "expanding-window cross-validation for the configured preset");
    app.add_subcommand("freeze", "run CV, fit the final model and write the frozen bundle");

    std::string bundle_override;
    auto* ood_cmd = app.add_subcommand("evaluate-ood", "frozen out-of-distribution evaluation");
    ood_cmd->add_option("--bundle", bundle_override, "bundle path (default from config)");
    auto* diag_cmd = app.add_subcommand("diagnose", "dump retrieved neighbors for OOD queries");
    diag_cmd->add_option("--bundle", bundle_override, "bundle path (default from config)");
    std::vector<std::string> diag_dates;
    diag_cmd->add_option("--date", diag_dates, "query date(s), default: every OOD day");
    auto* exp_cmd =
        app.add_subcommand("export-embeddings", "fused train/query vectors for projection");
    exp_cmd->add_option("--bundle", bundle_override, "bundle path (default from config)");

    std::uint64_t synth_seed = 7;
    std::size_t synth_days = 600;
    std::string synth_out = "out/synth";
    auto* synth_cmd =
        app.add_subcommand("synth-experiment", "synthetic regime-shift benchmark, all presets");
    synth_cmd->add_option("--seed", synth_seed, "generation seed");
    synth_cmd->add_option("--days", synth_days, "number of synthetic business days");
    synth_cmd->add_option("--out", synth_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("ingest")) return cmd_ingest(g);
        if (app.got_subcommand("cv")) return cmd_cv(g);
        if (app.got_subcommand("freeze")) return cmd_freeze(g);
        if (app.got_subcommand("evaluate-ood")) return cmd_evaluate_ood(g, bundle_override);
        if (app.got_subcommand("diagnose")) return cmd_diagnose(g, bundle_override, diag_dates);
        if (app.got_subcommand("export-embeddings"))
            return cmd_export_embeddings(g, bundle_override);
        if (app.got_subcommand("synth-experiment"))
            return cmd_synth(g, synth_seed, synth_days, synth_out);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ValidationError::exit_code;
    } catch (const MissingInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return MissingInputError::exit_code;
    } catch (const ProtocolError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ProtocolError::exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
