#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcast/calendar_io.hpp"
#include "mcast/config.hpp"
#include "mcast/model.hpp"
#include "mcast/report.hpp"
#include "mcast/retrieval.hpp"

namespace mcast {

struct IngestResult {
    AlignedDataset dataset;
    AlignReport report;
    int non_business_rows = 0;
};

// Read all configured sources, align them over [train_begin, ood_end] (or
// the train window alone when no OOD window is configured).
IngestResult ingest(const RunConfig& cfg);

struct Scalers {
    ScalerParams x_num;
    ScalerParams macro;
};

Scalers fit_scalers(const AlignedDataset& ds, Date train_begin, Date train_end);

// Model-ready rows for one preset. Retrieval presets consume the causal
// index; rows with no eligible history get a zero contextual memory and are
// counted in empty_retrieval.
struct FeatureMatrix {
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    std::vector<double> fwd_returns;
    std::vector<Date> dates;
    FeatureLayout layout;
    int empty_retrieval = 0;
};

FeatureMatrix build_features(const std::vector<AlignedRecord>& records, Preset preset,
                             const Scalers& scalers, const CausalIndex* index, int k,
                             std::optional<Date> eligible_before = std::nullopt);

// Five-fold expanding-window CV over the train-window records; test-day
// predictions are pooled across folds before computing metrics. Retrieval
// for fold rows is masked to dates before the fold's first test date.
EvaluationReport run_cv(const std::vector<AlignedRecord>& train_records, const RunConfig& cfg,
                        const Scalers& scalers, const CausalIndex* index);

// Everything the frozen-OOD protocol needs, persisted with a checksum.
struct FrozenBundle {
    Preset preset = Preset::MacroRetrieval;
    double alpha = 0;
    int k = 0;
    FeatureSpec features;
    TrainConfig train;
    Date train_begin, train_end;
    Scalers scalers;
    ModelParams params;
    std::string index_path;     // empty for non-retrieval presets
    std::string index_checksum; // fnv1a of the snapshot file
    EvaluationReport cv_report;
    std::string config_hash;
    std::string config_text;
};

// Run CV, fit the final model on the full train window, snapshot the index,
// and write the bundle.
FrozenBundle freeze(const AlignedDataset& ds, const RunConfig& cfg, const std::string& bundle_path,
                    const std::string& index_path);

void save_bundle(const FrozenBundle& b, const std::string& path);
FrozenBundle load_bundle(const std::string& path); // checksum-verified

// Frozen evaluation: rejects OOD rows at or before the bundle's train_end
// (ProtocolError) and mutates nothing. Emits the OOD report with robustness
// deltas against the bundle's CV report.
EvaluationReport evaluate_ood(const FrozenBundle& bundle, const std::vector<AlignedRecord>& ood,
                              const RunConfig& cfg);

// Neighbor diagnostics for the given query records against the bundle index,
// in (query date, rank) order.
std::vector<RetrievalDiagnostics> diagnose(const FrozenBundle& bundle,
                                           const std::vector<AlignedRecord>& queries);

// Fused vectors of index entries (tag "train") and query records
// (tag "query") for external projection tooling.
std::string embedding_export_csv(const CausalIndex& index,
                                 const std::vector<AlignedRecord>& queries, double alpha,
                                 const ScalerParams& macro_scaler);

std::vector<AlignedRecord> slice_window(const AlignedDataset& ds, Date begin, Date end);

} // namespace mcast
