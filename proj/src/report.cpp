#include "mcast/report.hpp"

#include "mcast/errors.hpp"
#include "mcast/io_util.hpp"

namespace mcast {

using json = nlohmann::ordered_json;

json report_to_json(const EvaluationReport& r) {
    json j;
    j["schema"] = "mcast-report v1";
    j["preset"] = r.preset;
    j["phase"] = r.phase;
    j["n_samples"] = r.n_samples;
    j["empty_retrieval_days"] = r.empty_retrieval_days;
    j["alpha"] = r.alpha;
    j["k"] = r.k;
    const auto& c = r.classification;
    j["classification"] = {{"accuracy", c.accuracy},
                           {"precision", c.precision},
                           {"recall", c.recall},
                           {"f1", c.f1},
                           {"mcc", c.mcc},
                           {"auroc", c.auroc},
                           {"flags",
                            {{"precision", c.precision_flag},
                             {"recall", c.recall_flag},
                             {"f1", c.f1_flag},
                             {"mcc", c.mcc_flag},
                             {"auroc", c.auroc_flag}}}};
    const auto& f = r.financial;
    j["financial"] = {{"profit_factor", f.profit_factor},
                      {"profit_factor_inf", f.profit_factor_inf},
                      {"win_rate", f.win_rate},
                      {"win_rate_flag", f.win_rate_flag},
                      {"sharpe_252", f.sharpe_252},
                      {"sharpe_flag", f.sharpe_flag}};
    if (r.has_deltas) {
        j["deltas"] = {{"delta_f1", r.deltas.delta_f1}, {"delta_sharpe", r.deltas.delta_sharpe}};
    }
    j["config_hash"] = r.config_hash;
    j["config"] = r.config_text;
    return j;
}

EvaluationReport report_from_json(const json& j) {
    if (j.value("schema", "") != "mcast-report v1") {
        throw ValidationError("report: unknown schema");
    }
    EvaluationReport r;
    r.preset = j.at("preset");
    r.phase = j.at("phase");
    r.n_samples = j.at("n_samples");
    r.empty_retrieval_days = j.at("empty_retrieval_days");
    r.alpha = j.at("alpha");
    r.k = j.at("k");
    const auto& c = j.at("classification");
    r.classification.accuracy = c.at("accuracy");
    r.classification.precision = c.at("precision");
    r.classification.recall = c.at("recall");
    r.classification.f1 = c.at("f1");
    r.classification.mcc = c.at("mcc");
    r.classification.auroc = c.at("auroc");
    const auto& cf = c.at("flags");
    r.classification.precision_flag = cf.at("precision");
    r.classification.recall_flag = cf.at("recall");
    r.classification.f1_flag = cf.at("f1");
    r.classification.mcc_flag = cf.at("mcc");
    r.classification.auroc_flag = cf.at("auroc");
    const auto& f = j.at("financial");
    r.financial.profit_factor = f.at("profit_factor");
    r.financial.profit_factor_inf = f.at("profit_factor_inf");
    r.financial.win_rate = f.at("win_rate");
    r.financial.win_rate_flag = f.at("win_rate_flag");
    r.financial.sharpe_252 = f.at("sharpe_252");
    r.financial.sharpe_flag = f.at("sharpe_flag");
    if (j.contains("deltas")) {
        r.has_deltas = true;
        r.deltas.delta_f1 = j.at("deltas").at("delta_f1");
        r.deltas.delta_sharpe = j.at("deltas").at("delta_sharpe");
    }
    r.config_hash = j.at("config_hash");
    r.config_text = j.at("config");
    return r;
}

void save_report(const EvaluationReport& r, const std::string& path) {
    write_file(path, report_to_json(r).dump(2) + "\n");
}

EvaluationReport load_report(const std::string& path) {
    return report_from_json(json::parse(read_file(path)));
}

} // namespace mcast
