#pragma once

#include <map>
#include <string>
#include <vector>

#include "mcast/calendar.hpp"
#include "mcast/features.hpp"
#include "mcast/model.hpp"

namespace mcast {

enum class Preset {
    NumericOnly,
    TextOnly,
    MultimodalNoRetrieval,
    TextRetrieval,  // alpha = 0
    MacroRetrieval, // alpha = 0.5, K = 5 by default
};

std::string preset_name(Preset p);
Preset parse_preset(const std::string& name);
std::vector<Preset> all_presets();

// Plain-text `[section]` / `key = value` run configuration. Unknown keys are
// rejected; the resolved canonical text is echoed into every output artifact
// and hashed for provenance.
struct RunConfig {
    // data
    std::string price_csv;
    std::string embeddings_file;
    std::string sentiment_csv;                    // optional
    std::map<std::string, std::string> macro_csv; // series id -> path
    std::map<std::string, int> macro_lag_override;
    std::string aligned_file; // default: <output_dir>/aligned.csv

    // calendar
    std::vector<Date> holidays;

    FeatureSpec features;

    // retrieval
    double alpha = 0.5;
    int k = 5;

    TrainConfig train;
    int folds = 5;

    // windows
    Date train_begin, train_end, ood_begin, ood_end;
    bool has_windows = false;
    bool has_ood = false;

    // run
    Preset preset = Preset::MacroRetrieval;
    std::string output_dir = "out";

    BusinessCalendar calendar() const { return BusinessCalendar({0, 1, 2, 3, 4}, holidays); }

    // alpha actually used for retrieval under this preset
    double effective_alpha() const { return preset == Preset::TextRetrieval ? 0.0 : alpha; }

    std::string canonical_text() const;
    std::string hash() const; // fnv1a hex of the canonical text
};

RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

} // namespace mcast
