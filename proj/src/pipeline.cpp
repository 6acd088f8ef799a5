#include "mcast/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "mcast/errors.hpp"
#include "mcast/evaluation.hpp"
#include "mcast/io_util.hpp"

namespace mcast {

using json = nlohmann::ordered_json;

IngestResult ingest(const RunConfig& cfg) {
    if (!cfg.has_windows) {
        throw ValidationError("ingest: config must set windows.train_begin/train_end");
    }
    BusinessCalendar calendar = cfg.calendar();
    IngestResult result;
    std::vector<PriceBar> bars = load_price_csv(cfg.price_csv, calendar, &result.non_business_rows);
    EmbeddingFile embeddings = load_embeddings(cfg.embeddings_file);
    SentimentTable sentiment;
    if (!cfg.sentiment_csv.empty()) {
        sentiment = load_sentiment_csv(cfg.sentiment_csv);
    }
    Date span_begin = cfg.train_begin;
    Date span_end = cfg.has_ood ? cfg.ood_end : cfg.train_end;
    std::map<std::string, DailySeries> macro_daily;
    for (const auto& [id, path] : cfg.macro_csv) {
        std::optional<int> lag;
        auto ov = cfg.macro_lag_override.find(id);
        if (ov != cfg.macro_lag_override.end()) {
            lag = ov->second;
        }
        MacroSeries series = load_macro_csv(path, id, lag);
        macro_daily[id] = apply_publication_lag(series, calendar, span_begin, span_end);
    }
    result.dataset = align(bars, macro_daily, embeddings, sentiment, cfg.features, calendar,
                           span_begin, span_end, &result.report);
    return result;
}

Scalers fit_scalers(const AlignedDataset& ds, Date train_begin, Date train_end) {
    std::vector<std::vector<double>> x_rows, z_rows;
    std::vector<Date> dates;
    for (const auto& r : ds.records) {
        x_rows.push_back(r.x_num);
        z_rows.push_back(r.z_vec);
        dates.push_back(r.date);
    }
    Scalers s;
    s.x_num = fit_scaler(x_rows, dates, train_begin, train_end);
    s.macro = fit_scaler(z_rows, dates, train_begin, train_end);
    return s;
}

FeatureMatrix build_features(const std::vector<AlignedRecord>& records, Preset preset,
                             const Scalers& scalers, const CausalIndex* index, int k,
                             std::optional<Date> eligible_before) {
    const bool retrieval =
        preset == Preset::TextRetrieval || preset == Preset::MacroRetrieval;
    if (retrieval && index == nullptr) {
        throw ValidationError("build_features: retrieval preset requires an index");
    }
    FeatureMatrix out;
    for (const auto& rec : records) {
        std::vector<double> row;
        FeatureLayout layout;
        std::vector<double> z_std = scalers.macro.apply(rec.z_vec);
        if (preset != Preset::TextOnly) {
            std::vector<double> x = scalers.x_num.apply(rec.x_num);
            layout.x_num_dim = static_cast<int>(x.size());
            row.insert(row.end(), x.begin(), x.end());
        }
        switch (preset) {
            case Preset::NumericOnly:
                break;
            case Preset::TextOnly:
                layout.extra_dim = static_cast<int>(rec.t_vec.size());
                row.insert(row.end(), rec.t_vec.begin(), rec.t_vec.end());
                break;
            case Preset::MultimodalNoRetrieval:
                layout.extra_dim = static_cast<int>(rec.t_vec.size() + z_std.size());
                row.insert(row.end(), rec.t_vec.begin(), rec.t_vec.end());
                row.insert(row.end(), z_std.begin(), z_std.end());
                break;
            case Preset::TextRetrieval:
            case Preset::MacroRetrieval: {
                FusedQuery q = fuse(rec.t_vec, z_std, index->alpha, rec.date);
                std::vector<Neighbor> neighbors =
                    search_causal(*index, q, rec.date, k, eligible_before);
                layout.r_dim = index->text_dim;
                if (neighbors.empty()) {
                    ++out.empty_retrieval;
                    row.insert(row.end(), static_cast<std::size_t>(index->text_dim), 0.0);
                } else {
                    ContextualMemory mem = contextual_memory(*index, neighbors, rec.date);
                    row.insert(row.end(), mem.vector.begin(), mem.vector.end());
                }
                break;
            }
        }
        out.layout = layout;
        out.rows.push_back(std::move(row));
        out.labels.push_back(rec.label);
        out.fwd_returns.push_back(rec.fwd_return);
        out.dates.push_back(rec.date);
    }
    return out;
}

namespace {

EvaluationReport make_report(const std::string& phase, const RunConfig& cfg,
                             const std::vector<int>& labels, const std::vector<int>& positions,
                             const std::vector<double>& probabilities,
                             const std::vector<double>& fwd_returns, int empty_retrieval) {
    std::vector<int> predictions(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        predictions[i] = positions[i] > 0 ? 1 : 0;
    }
    EvaluationReport rep;
    rep.preset = preset_name(cfg.preset);
    rep.phase = phase;
    rep.n_samples = static_cast<int>(labels.size());
    rep.empty_retrieval_days = empty_retrieval;
    rep.alpha = cfg.effective_alpha();
    rep.k = cfg.k;
    rep.classification = classification_metrics(labels, predictions, probabilities);
    rep.financial = financial_metrics(strategy_returns(positions, fwd_returns));
    rep.config_hash = cfg.hash();
    rep.config_text = cfg.canonical_text();
    return rep;
}

} // namespace

EvaluationReport run_cv(const std::vector<AlignedRecord>& train_records, const RunConfig& cfg,
                        const Scalers& scalers, const CausalIndex* index) {
    std::vector<FoldSplit> folds = time_series_split(train_records.size(), cfg.folds);
    std::vector<int> labels, positions;
    std::vector<double> probabilities, fwd_returns;
    int empty_retrieval = 0;
    for (const FoldSplit& fold : folds) {
        // retrieval is masked to the fold's training period
        Date cutoff = train_records[fold.test_begin].date;
        std::vector<AlignedRecord> fold_train(train_records.begin(),
                                              train_records.begin() + fold.train_end);
        std::vector<AlignedRecord> fold_test(train_records.begin() + fold.test_begin,
                                             train_records.begin() + fold.test_end);
        FeatureMatrix train_fm =
            build_features(fold_train, cfg.preset, scalers, index, cfg.k, cutoff);
        FeatureMatrix test_fm =
            build_features(fold_test, cfg.preset, scalers, index, cfg.k, cutoff);
        ModelParams params = train_logistic(train_fm.rows, train_fm.labels, cfg.train);
        params.layout = train_fm.layout;
        empty_retrieval += train_fm.empty_retrieval + test_fm.empty_retrieval;
        for (std::size_t i = 0; i < test_fm.rows.size(); ++i) {
            double p = predict_proba(params, test_fm.rows[i]);
            labels.push_back(test_fm.labels[i]);
            probabilities.push_back(p);
            positions.push_back(predict_position(p));
            fwd_returns.push_back(test_fm.fwd_returns[i]);
        }
    }
    return make_report("cv", cfg, labels, positions, probabilities, fwd_returns, empty_retrieval);
}

namespace {

json scaler_to_json(const ScalerParams& s) {
    json j;
    j["mean"] = s.mean;
    j["std"] = s.std;
    std::vector<int> deg(s.degenerate.begin(), s.degenerate.end());
    j["degenerate"] = deg;
    return j;
}

ScalerParams scaler_from_json(const json& j) {
    ScalerParams s;
    s.mean = j.at("mean").get<std::vector<double>>();
    s.std = j.at("std").get<std::vector<double>>();
    for (int d : j.at("degenerate").get<std::vector<int>>()) {
        s.degenerate.push_back(d != 0);
    }
    return s;
}

} // namespace

FrozenBundle freeze(const AlignedDataset& ds, const RunConfig& cfg, const std::string& bundle_path,
                    const std::string& index_path) {
    if (!cfg.has_windows) {
        throw ValidationError("freeze: config must set the train window");
    }
    std::vector<AlignedRecord> train_records = slice_window(ds, cfg.train_begin, cfg.train_end);
    if (train_records.empty()) {
        throw ValidationError("freeze: no aligned rows in the train window");
    }
    AlignedDataset train_ds;
    train_ds.records = train_records;
    Scalers scalers = fit_scalers(train_ds, cfg.train_begin, cfg.train_end);

    FrozenBundle b;
    b.preset = cfg.preset;
    b.alpha = cfg.effective_alpha();
    b.k = cfg.k;
    b.features = cfg.features;
    b.train = cfg.train;
    b.train_begin = cfg.train_begin;
    b.train_end = cfg.train_end;
    b.scalers = scalers;
    b.config_hash = cfg.hash();
    b.config_text = cfg.canonical_text();

    const bool retrieval =
        cfg.preset == Preset::TextRetrieval || cfg.preset == Preset::MacroRetrieval;
    CausalIndex index;
    const CausalIndex* index_ptr = nullptr;
    if (retrieval) {
        index = build_index(train_records, scalers.macro, cfg.effective_alpha());
        save_index(index, index_path);
        b.index_path = index_path;
        b.index_checksum = fnv1a_hex(read_file(index_path));
        index_ptr = &index;
    }

    b.cv_report = run_cv(train_records, cfg, scalers, index_ptr);

    FeatureMatrix fm = build_features(train_records, cfg.preset, scalers, index_ptr, cfg.k);
    std::vector<TrainLogRow> log;
    b.params = train_logistic(fm.rows, fm.labels, cfg.train, &log);
    b.params.layout = fm.layout;
    b.params.feature_scaler = scalers.x_num;

    write_file(bundle_path + ".trainlog.csv", train_log_csv(log));
    save_bundle(b, bundle_path);
    return b;
}

void save_bundle(const FrozenBundle& b, const std::string& path) {
    json payload;
    payload["preset"] = preset_name(b.preset);
    payload["alpha"] = b.alpha;
    payload["k"] = b.k;
    payload["feature_spec"] = {{"return_lags", b.features.return_lags},
                               {"vol_window", b.features.vol_window},
                               {"include_ohlcv", b.features.include_ohlcv},
                               {"sentiment_columns", b.features.sentiment_columns}};
    payload["train_config"] = {{"learning_rate", b.train.learning_rate},
                               {"l2_lambda", b.train.l2_lambda},
                               {"max_epochs", b.train.max_epochs},
                               {"tolerance", b.train.tolerance},
                               {"seed", b.train.seed}};
    payload["train_begin"] = b.train_begin.to_string();
    payload["train_end"] = b.train_end.to_string();
    payload["x_scaler"] = scaler_to_json(b.scalers.x_num);
    payload["z_scaler"] = scaler_to_json(b.scalers.macro);
    payload["weights"] = b.params.weights;
    payload["bias"] = b.params.bias;
    payload["layout"] = {{"x_num_dim", b.params.layout.x_num_dim},
                         {"r_dim", b.params.layout.r_dim},
                         {"extra_dim", b.params.layout.extra_dim}};
    payload["index_path"] = b.index_path;
    payload["index_checksum"] = b.index_checksum;
    payload["cv_report"] = report_to_json(b.cv_report);
    payload["config_hash"] = b.config_hash;
    payload["config"] = b.config_text;

    json file;
    file["schema"] = "mcast-bundle v1";
    file["checksum"] = fnv1a_hex(payload.dump());
    file["payload"] = payload;
    write_file(path, file.dump(2) + "\n");
}

FrozenBundle load_bundle(const std::string& path) {
    json file = json::parse(read_file(path));
    if (file.value("schema", "") != "mcast-bundle v1") {
        throw ValidationError(path + ": not a frozen bundle");
    }
    const json& payload = file.at("payload");
    if (fnv1a_hex(payload.dump()) != file.at("checksum").get<std::string>()) {
        throw ProtocolError(path + ": bundle checksum mismatch");
    }
    FrozenBundle b;
    b.preset = parse_preset(payload.at("preset"));
    b.alpha = payload.at("alpha");
    b.k = payload.at("k");
    const json& fs = payload.at("feature_spec");
    b.features.return_lags = fs.at("return_lags").get<std::vector<int>>();
    b.features.vol_window = fs.at("vol_window");
    b.features.include_ohlcv = fs.at("include_ohlcv");
    b.features.sentiment_columns = fs.at("sentiment_columns").get<std::vector<std::string>>();
    const json& tc = payload.at("train_config");
    b.train.learning_rate = tc.at("learning_rate");
    b.train.l2_lambda = tc.at("l2_lambda");
    b.train.max_epochs = tc.at("max_epochs");
    b.train.tolerance = tc.at("tolerance");
    b.train.seed = tc.at("seed");
    b.train_begin = Date::parse(payload.at("train_begin"));
    b.train_end = Date::parse(payload.at("train_end"));
    b.scalers.x_num = scaler_from_json(payload.at("x_scaler"));
    b.scalers.macro = scaler_from_json(payload.at("z_scaler"));
    b.params.weights = payload.at("weights").get<std::vector<double>>();
    b.params.bias = payload.at("bias");
    b.params.layout.x_num_dim = payload.at("layout").at("x_num_dim");
    b.params.layout.r_dim = payload.at("layout").at("r_dim");
    b.params.layout.extra_dim = payload.at("layout").at("extra_dim");
    b.params.feature_scaler = b.scalers.x_num;
    b.index_path = payload.at("index_path");
    b.index_checksum = payload.at("index_checksum");
    b.cv_report = report_from_json(payload.at("cv_report"));
    b.config_hash = payload.at("config_hash");
    b.config_text = payload.at("config");
    return b;
}

namespace {

CausalIndex load_bundle_index(const FrozenBundle& bundle) {
    if (fnv1a_hex(read_file(bundle.index_path)) != bundle.index_checksum) {
        throw ValidationError(bundle.index_path + ": index checksum does not match the bundle");
    }
    return load_index(bundle.index_path);
}

} // namespace

EvaluationReport evaluate_ood(const FrozenBundle& bundle, const std::vector<AlignedRecord>& ood,
                              const RunConfig& cfg) {
    if (ood.empty()) {
        throw ValidationError("evaluate_ood: empty OOD window");
    }
    for (const auto& rec : ood) {
        if (rec.date <= bundle.train_end) {
            throw ProtocolError("evaluate_ood: OOD date " + rec.date.to_string() +
                                " does not lie strictly after the train window end " +
                                bundle.train_end.to_string());
        }
    }
    const bool retrieval =
        bundle.preset == Preset::TextRetrieval || bundle.preset == Preset::MacroRetrieval;
    CausalIndex index;
    const CausalIndex* index_ptr = nullptr;
    if (retrieval) {
        index = load_bundle_index(bundle);
        index_ptr = &index;
    }
    FeatureMatrix fm = build_features(ood, bundle.preset, bundle.scalers, index_ptr, bundle.k);
    std::vector<int> labels = fm.labels, positions;
    std::vector<double> probabilities, fwd_returns = fm.fwd_returns;
    for (const auto& row : fm.rows) {
        double p = predict_proba(bundle.params, row);
        probabilities.push_back(p);
        positions.push_back(predict_position(p));
    }
    RunConfig echo = cfg;
    echo.preset = bundle.preset;
    EvaluationReport rep = make_report("ood", echo, labels, positions, probabilities, fwd_returns,
                                       fm.empty_retrieval);
    rep.alpha = bundle.alpha;
    rep.k = bundle.k;
    rep.has_deltas = true;
    rep.deltas = robustness_deltas(bundle.cv_report.classification.f1,
                                   bundle.cv_report.financial.sharpe_252, rep.classification.f1,
                                   rep.financial.sharpe_252);
    return rep;
}

std::vector<RetrievalDiagnostics> diagnose(const FrozenBundle& bundle,
                                           const std::vector<AlignedRecord>& queries) {
    CausalIndex index = load_bundle_index(bundle);
    std::vector<RetrievalDiagnostics> rows;
    for (const auto& rec : queries) {
        std::vector<double> z_std = bundle.scalers.macro.apply(rec.z_vec);
        FusedQuery q = fuse(rec.t_vec, z_std, bundle.alpha, rec.date);
        std::vector<Neighbor> neighbors = search_causal(index, q, rec.date, bundle.k);
        auto d = diagnostics(index, rec.date, rec.t_vec, z_std, neighbors);
        rows.insert(rows.end(), d.begin(), d.end());
    }
    return rows;
}

std::string embedding_export_csv(const CausalIndex& index,
                                 const std::vector<AlignedRecord>& queries, double alpha,
                                 const ScalerParams& macro_scaler) {
    std::ostringstream out;
    out << "date,tag";
    for (int i = 0; i < index.text_dim + index.macro_dim; ++i) {
        out << ",v" << i + 1;
    }
    out << "\n";
    auto emit = [&out](Date date, const char* tag, const std::vector<double>& v) {
        out << date.to_string() << "," << tag;
        for (double x : v) {
            out << "," << format_double(x);
        }
        out << "\n";
    };
    for (const auto& e : index.entries) {
        emit(e.date, "train", e.fused);
    }
    for (const auto& rec : queries) {
        emit(rec.date, "query", fuse(rec.t_vec, macro_scaler.apply(rec.z_vec), alpha).vector);
    }
    return out.str();
}

std::vector<AlignedRecord> slice_window(const AlignedDataset& ds, Date begin, Date end) {
    std::vector<AlignedRecord> out;
    for (const auto& r : ds.records) {
        if (r.date >= begin && r.date <= end) {
            out.push_back(r);
        }
    }
    return out;
}

} // namespace mcast
