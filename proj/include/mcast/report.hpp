#pragma once

#include <string>

#include "mcast/evaluation.hpp"

#include <json.hpp>

namespace mcast {

// One configuration's metrics for one phase, plus full provenance.
struct EvaluationReport {
    std::string preset;
    std::string phase; // "cv" or "ood"
    int n_samples = 0;
    int empty_retrieval_days = 0;
    double alpha = 0;
    int k = 0;
    ClassificationMetrics classification;
    FinancialMetrics financial;
    bool has_deltas = false;
    RobustnessDeltas deltas;
    std::string config_hash;
    std::string config_text; // resolved RunConfig echoed verbatim
};

nlohmann::ordered_json report_to_json(const EvaluationReport& r);
EvaluationReport report_from_json(const nlohmann::ordered_json& j);

void save_report(const EvaluationReport& r, const std::string& path);
EvaluationReport load_report(const std::string& path);

} // namespace mcast
