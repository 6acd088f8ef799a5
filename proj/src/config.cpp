#include "mcast/config.hpp"

#include <algorithm>
#include <sstream>

#include "mcast/errors.hpp"
#include "mcast/io_util.hpp"

namespace mcast {

std::string preset_name(Preset p) {
    switch (p) {
        case Preset::NumericOnly: return "numeric-only";
        case Preset::TextOnly: return "text-only";
        case Preset::MultimodalNoRetrieval: return "multimodal";
        case Preset::TextRetrieval: return "text-retrieval";
        case Preset::MacroRetrieval: return "macro-retrieval";
    }
    throw ValidationError("preset_name: unreachable");
}

Preset parse_preset(const std::string& name) {
    for (Preset p : all_presets()) {
        if (preset_name(p) == name) {
            return p;
        }
    }
    throw ValidationError("unknown preset '" + name +
                          "' (expected numeric-only, text-only, multimodal, text-retrieval or "
                          "macro-retrieval)");
}

std::vector<Preset> all_presets() {
    return {Preset::NumericOnly, Preset::TextOnly, Preset::MultimodalNoRetrieval,
            Preset::TextRetrieval, Preset::MacroRetrieval};
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) {
        return "";
    }
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, sep)) {
        cur = trim(cur);
        if (!cur.empty()) {
            out.push_back(cur);
        }
    }
    return out;
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ValidationError("config key '" + key + "': expected true/false, got '" + v + "'");
}

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    bool saw_train_begin = false, saw_train_end = false, saw_ood_begin = false,
         saw_ood_end = false;
    std::istringstream ss(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const std::string ctx = origin + ":" + std::to_string(lineno);
        if (line.front() == '[' && line.back() == ']') {
            section = line.substr(1, line.size() - 2);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(ctx + ": expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        std::string qual = section + "." + key;

        if (qual == "data.price_csv") {
            cfg.price_csv = value;
        } else if (qual == "data.embeddings_file") {
            cfg.embeddings_file = value;
        } else if (qual == "data.sentiment_csv") {
            cfg.sentiment_csv = value;
        } else if (qual == "data.aligned_file") {
            cfg.aligned_file = value;
        } else if (qual == "data.macro_series") {
            for (const auto& item : split_list(value, ';')) {
                auto c = item.find(':');
                if (c == std::string::npos) {
                    throw ValidationError(ctx + ": macro_series items must be ID:path");
                }
                cfg.macro_csv[trim(item.substr(0, c))] = trim(item.substr(c + 1));
            }
        } else if (qual == "data.macro_lags") {
            for (const auto& item : split_list(value, ';')) {
                auto c = item.find(':');
                if (c == std::string::npos) {
                    throw ValidationError(ctx + ": macro_lags items must be ID:days");
                }
                cfg.macro_lag_override[trim(item.substr(0, c))] =
                    static_cast<int>(parse_double(trim(item.substr(c + 1)), ctx));
            }
        } else if (qual == "calendar.holidays") {
            for (const auto& d : split_list(value, ',')) {
                cfg.holidays.push_back(Date::parse(d));
            }
        } else if (qual == "features.return_lags") {
            cfg.features.return_lags.clear();
            for (const auto& l : split_list(value, ',')) {
                cfg.features.return_lags.push_back(static_cast<int>(parse_double(l, ctx)));
            }
        } else if (qual == "features.vol_window") {
            cfg.features.vol_window = static_cast<int>(parse_double(value, ctx));
        } else if (qual == "features.include_ohlcv") {
            cfg.features.include_ohlcv = parse_bool(value, qual);
        } else if (qual == "features.sentiment_columns") {
            cfg.features.sentiment_columns = split_list(value, ',');
        } else if (qual == "retrieval.alpha") {
            cfg.alpha = parse_double(value, ctx);
        } else if (qual == "retrieval.k") {
            cfg.k = static_cast<int>(parse_double(value, ctx));
        } else if (qual == "train.learning_rate") {
            cfg.train.learning_rate = parse_double(value, ctx);
        } else if (qual == "train.l2_lambda") {
            cfg.train.l2_lambda = parse_double(value, ctx);
        } else if (qual == "train.max_epochs") {
            cfg.train.max_epochs = static_cast<int>(parse_double(value, ctx));
        } else if (qual == "train.tolerance") {
            cfg.train.tolerance = parse_double(value, ctx);
        } else if (qual == "train.seed") {
            cfg.train.seed = static_cast<long>(parse_double(value, ctx));
        } else if (qual == "train.folds") {
            cfg.folds = static_cast<int>(parse_double(value, ctx));
        } else if (qual == "windows.train_begin") {
            cfg.train_begin = Date::parse(value);
            saw_train_begin = true;
        } else if (qual == "windows.train_end") {
            cfg.train_end = Date::parse(value);
            saw_train_end = true;
        } else if (qual == "windows.ood_begin") {
            cfg.ood_begin = Date::parse(value);
            saw_ood_begin = true;
        } else if (qual == "windows.ood_end") {
            cfg.ood_end = Date::parse(value);
            saw_ood_end = true;
        } else if (qual == "run.preset") {
            cfg.preset = parse_preset(value);
        } else if (qual == "run.output_dir") {
            cfg.output_dir = value;
        } else {
            throw ValidationError(ctx + ": unknown config key '" + qual + "'");
        }
    }
    cfg.has_windows = saw_train_begin && saw_train_end;
    cfg.has_ood = saw_ood_begin && saw_ood_end;
    if (saw_train_begin != saw_train_end || saw_ood_begin != saw_ood_end) {
        throw ValidationError(origin + ": window begin/end must be given together");
    }
    if (cfg.aligned_file.empty()) {
        cfg.aligned_file = cfg.output_dir + "/aligned.csv";
    }
    if (cfg.alpha < 0) {
        throw ValidationError(origin + ": retrieval.alpha must be >= 0");
    }
    if (cfg.k < 1) {
        throw ValidationError(origin + ": retrieval.k must be >= 1");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    return parse_config_text(read_file(path), path);
}

std::string RunConfig::canonical_text() const {
    std::ostringstream out;
    out << "[data]\n";
    out << "price_csv = " << price_csv << "\n";
    out << "embeddings_file = " << embeddings_file << "\n";
    out << "sentiment_csv = " << sentiment_csv << "\n";
    out << "aligned_file = " << aligned_file << "\n";
    out << "macro_series = ";
    bool first = true;
    for (const auto& [id, path] : macro_csv) {
        out << (first ? "" : "; ") << id << ":" << path;
        first = false;
    }
    out << "\nmacro_lags = ";
    first = true;
    for (const auto& [id, lag] : macro_lag_override) {
        out << (first ? "" : "; ") << id << ":" << lag;
        first = false;
    }
    out << "\n[calendar]\nholidays = ";
    for (std::size_t i = 0; i < holidays.size(); ++i) {
        out << (i ? "," : "") << holidays[i].to_string();
    }
    out << "\n[features]\nreturn_lags = ";
    for (std::size_t i = 0; i < features.return_lags.size(); ++i) {
        out << (i ? "," : "") << features.return_lags[i];
    }
    out << "\nvol_window = " << features.vol_window << "\n";
    out << "include_ohlcv = " << (features.include_ohlcv ? "true" : "false") << "\n";
    out << "sentiment_columns = ";
    for (std::size_t i = 0; i < features.sentiment_columns.size(); ++i) {
        out << (i ? "," : "") << features.sentiment_columns[i];
    }
    out << "\n[retrieval]\nalpha = " << format_double(alpha) << "\nk = " << k << "\n";
    out << "[train]\nlearning_rate = " << format_double(train.learning_rate) << "\n";
    out << "l2_lambda = " << format_double(train.l2_lambda) << "\n";
    out << "max_epochs = " << train.max_epochs << "\n";
    out << "tolerance = " << format_double(train.tolerance) << "\n";
    out << "seed = " << train.seed << "\n";
    out << "folds = " << folds << "\n";
    out << "[windows]\n";
    if (has_windows) {
        out << "train_begin = " << train_begin.to_string() << "\n";
        out << "train_end = " << train_end.to_string() << "\n";
    }
    if (has_ood) {
        out << "ood_begin = " << ood_begin.to_string() << "\n";
        out << "ood_end = " << ood_end.to_string() << "\n";
    }
    out << "[run]\npreset = " << preset_name(preset) << "\n";
    out << "output_dir = " << output_dir << "\n";
    return out.str();
}

std::string RunConfig::hash() const { return fnv1a_hex(canonical_text()); }

} // namespace mcast
