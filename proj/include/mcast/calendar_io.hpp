#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mcast/calendar.hpp"
#include "mcast/date.hpp"

namespace mcast {

struct FeatureSpec; // features.hpp

struct PriceBar {
    Date date;
    double open = 0, high = 0, low = 0, close = 0;
    double volume = 0;
};

struct MacroObservation {
    Date reference_date;
    double value = 0;
};

// Raw macro indicator with release-lag metadata, before alignment.
struct MacroSeries {
    std::string series_id;
    std::vector<MacroObservation> observations; // strictly increasing reference dates
    int release_lag_bd = 0;
    int skipped_missing = 0; // '.' placeholders dropped while parsing
};

struct EmbeddingRecord {
    Date date;
    std::vector<double> vector;
};

struct EmbeddingFile {
    int dim = 0;
    std::vector<EmbeddingRecord> records; // unique dates, all dimension `dim`
};

// Per-column standardization statistics, fitted on the training window only.
struct ScalerParams {
    std::vector<double> mean;
    std::vector<double> std; // 1.0 where the column was degenerate
    std::vector<bool> degenerate;

    std::vector<double> apply(const std::vector<double>& row) const;
    std::vector<double> invert(const std::vector<double>& row) const;
    std::size_t size() const { return mean.size(); }
};

// One business day's causally lagged inputs. All stored values are raw
// (unstandardized): deleting source rows dated after `date` leaves the
// features unchanged.
struct AlignedRecord {
    Date date;
    std::vector<double> x_num;
    std::vector<double> t_vec;
    std::vector<double> z_vec;
    int label = 0;
    // close(t) -> close(t+1) simple return, realized by a position decided at
    // t; target-side data, never a feature.
    double fwd_return = 0;
};

struct AlignedDataset {
    std::vector<AlignedRecord> records; // date-sorted
    std::vector<std::string> macro_ids; // z_vec column order
    int text_dim = 0;
    int macro_dim = 0;
    int num_dim = 0;
};

struct AlignReport {
    int kept = 0;
    int dropped_missing_embedding = 0;
    int dropped_missing_macro = 0;
    int dropped_missing_numeric = 0;
    int dropped_missing_label = 0;
};

using DailySeries = std::map<Date, double>;

// Default publication lags in business days; unlisted series get 0.
int default_release_lag(const std::string& series_id);

// Price CSV: header `date,open,high,low,close,volume`. Non-business-day rows
// are dropped and counted in *weekend_warnings when provided.
std::vector<PriceBar> load_price_csv(const std::string& path, const BusinessCalendar& calendar,
                                     int* weekend_warnings = nullptr);

// Macro CSV offline twin: header `date,value`, '.' denotes missing.
MacroSeries load_macro_csv(const std::string& path, const std::string& series_id,
                           std::optional<int> release_lag_bd = std::nullopt);

// For each business day b in [span_begin, span_end], the value of the latest
// observation whose reference date, advanced by release_lag_bd business days,
// is <= b. Days before the first available observation are absent.
DailySeries apply_publication_lag(const MacroSeries& series, const BusinessCalendar& calendar,
                                  Date span_begin, Date span_end);

// Population mean/std per column over rows whose date lies in
// [window_begin, window_end]. Stds below 1e-12 are replaced by 1 and flagged.
ScalerParams fit_scaler(const std::vector<std::vector<double>>& rows,
                        const std::vector<Date>& dates, Date window_begin, Date window_end);

// Embedding file: first line `# dim=<d> normalized=<true|false>`, then
// `date,v1,...,vd` rows. Vectors are re-normalized when normalized=false.
EmbeddingFile load_embeddings(const std::string& path);

// Sentiment scalars pre-supplied by the provider: header `date,<col>,...`.
struct SentimentTable {
    std::vector<std::string> columns;
    std::map<Date, std::vector<double>> rows;
};
SentimentTable load_sentiment_csv(const std::string& path);

AlignedDataset align(const std::vector<PriceBar>& bars,
                     const std::map<std::string, DailySeries>& macro_daily,
                     const EmbeddingFile& embeddings, const SentimentTable& sentiment,
                     const FeatureSpec& spec, const BusinessCalendar& calendar, Date span_begin,
                     Date span_end, AlignReport* report = nullptr);

// Aligned dataset table, round-trips bit-exactly.
void save_aligned(const AlignedDataset& ds, const std::string& path);
AlignedDataset load_aligned(const std::string& path);

} // namespace mcast
