#include "mcast/calendar_io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mcast/errors.hpp"
#include "mcast/features.hpp"
#include "mcast/io_util.hpp"

namespace mcast {

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::string content = read_file(path);
    std::vector<std::string> lines;
    std::istringstream ss(content);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        lines.push_back(line);
    }
    return lines;
}

} // namespace

std::vector<double> ScalerParams::apply(const std::vector<double>& row) const {
    if (row.size() != mean.size()) {
        throw ValidationError("ScalerParams::apply: dimension mismatch");
    }
    std::vector<double> out(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
        out[i] = (row[i] - mean[i]) / std[i];
    }
    return out;
}

std::vector<double> ScalerParams::invert(const std::vector<double>& row) const {
    if (row.size() != mean.size()) {
        throw ValidationError("ScalerParams::invert: dimension mismatch");
    }
    std::vector<double> out(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) {
        out[i] = row[i] * std[i] + mean[i];
    }
    return out;
}

int default_release_lag(const std::string& series_id) {
    if (series_id == "CPI" || series_id == "CPIAUCSL") return 10;
    if (series_id == "UNRATE") return 5;
    if (series_id == "GDP") return 30;
    if (series_id == "T10Y2Y") return 0;
    return 0;
}

std::vector<PriceBar> load_price_csv(const std::string& path, const BusinessCalendar& calendar,
                                     int* weekend_warnings) {
    std::vector<std::string> lines = read_lines(path);
    if (lines.empty() || lines[0] != "date,open,high,low,close,volume") {
        throw ValidationError(path + ": expected header 'date,open,high,low,close,volume'");
    }
    std::vector<PriceBar> bars;
    int warned = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        const std::string ctx = path + ":" + std::to_string(i + 1);
        auto f = split_csv_line(lines[i]);
        if (f.size() != 6) {
            throw ValidationError(ctx + ": expected 6 fields, got " + std::to_string(f.size()));
        }
        PriceBar b;
        try {
            b.date = Date::parse(f[0]);
        } catch (const ValidationError& e) {
            throw ValidationError(ctx + ": " + e.what());
        }
        b.open = parse_double(f[1], ctx);
        b.high = parse_double(f[2], ctx);
        b.low = parse_double(f[3], ctx);
        b.close = parse_double(f[4], ctx);
        b.volume = parse_double(f[5], ctx);
        if (b.low > std::min(b.open, b.close) || b.high < std::max(b.open, b.close)) {
            throw ValidationError(ctx + ": OHLC invariant violated (low " + format_double(b.low) +
                                  ", high " + format_double(b.high) + ")");
        }
        if (b.volume < 0) {
            throw ValidationError(ctx + ": negative volume");
        }
        if (!calendar.is_business_day(b.date)) {
            ++warned;
            continue;
        }
        bars.push_back(b);
    }
    std::sort(bars.begin(), bars.end(),
              [](const PriceBar& a, const PriceBar& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < bars.size(); ++i) {
        if (bars[i].date == bars[i - 1].date) {
            throw ValidationError(path + ": duplicate date " + bars[i].date.to_string());
        }
    }
    if (weekend_warnings) {
        *weekend_warnings = warned;
    }
    return bars;
}

MacroSeries load_macro_csv(const std::string& path, const std::string& series_id,
                           std::optional<int> release_lag_bd) {
    std::vector<std::string> lines = read_lines(path);
    if (lines.empty() || lines[0] != "date,value") {
        throw ValidationError(path + ": expected header 'date,value'");
    }
    MacroSeries s;
    s.series_id = series_id;
    s.release_lag_bd = release_lag_bd.value_or(default_release_lag(series_id));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        const std::string ctx = path + ":" + std::to_string(i + 1);
        auto f = split_csv_line(lines[i]);
        if (f.size() != 2) {
            throw ValidationError(ctx + ": expected 2 fields");
        }
        if (f[1] == ".") {
            ++s.skipped_missing;
            continue;
        }
        MacroObservation obs;
        obs.reference_date = Date::parse(f[0]);
        obs.value = parse_double(f[1], ctx);
        if (!s.observations.empty() && obs.reference_date <= s.observations.back().reference_date) {
            throw ValidationError(ctx + ": observation dates must be strictly increasing");
        }
        s.observations.push_back(obs);
    }
    return s;
}

DailySeries apply_publication_lag(const MacroSeries& series, const BusinessCalendar& calendar,
                                  Date span_begin, Date span_end) {
    if (series.observations.empty()) {
        throw ValidationError("apply_publication_lag: empty series " + series.series_id);
    }
    // Availability date of each observation: reference date pushed forward by
    // the release lag.
    std::vector<std::pair<Date, double>> available;
    available.reserve(series.observations.size());
    for (const auto& obs : series.observations) {
        available.emplace_back(calendar.add_business_days(obs.reference_date, series.release_lag_bd),
                               obs.value);
    }
    DailySeries out;
    for (Date b : calendar.business_days(span_begin, span_end)) {
        // latest observation available at or before b
        const std::pair<Date, double>* best = nullptr;
        for (const auto& a : available) {
            if (a.first <= b) {
                best = &a;
            } else {
                break;
            }
        }
        if (best) {
            out[b] = best->second;
        }
    }
    return out;
}

ScalerParams fit_scaler(const std::vector<std::vector<double>>& rows,
                        const std::vector<Date>& dates, Date window_begin, Date window_end) {
    if (rows.size() != dates.size()) {
        throw ValidationError("fit_scaler: rows/dates length mismatch");
    }
    std::vector<const std::vector<double>*> in_window;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (dates[i] >= window_begin && dates[i] <= window_end) {
            in_window.push_back(&rows[i]);
        }
    }
    if (in_window.size() < 2) {
        throw ValidationError("fit_scaler: fewer than 2 rows in the training window");
    }
    const std::size_t cols = in_window[0]->size();
    ScalerParams p;
    p.mean.assign(cols, 0.0);
    p.std.assign(cols, 0.0);
    p.degenerate.assign(cols, false);
    for (const auto* row : in_window) {
        if (row->size() != cols) {
            throw ValidationError("fit_scaler: ragged matrix");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            p.mean[c] += (*row)[c];
        }
    }
    for (std::size_t c = 0; c < cols; ++c) {
        p.mean[c] /= static_cast<double>(in_window.size());
    }
    for (const auto* row : in_window) {
        for (std::size_t c = 0; c < cols; ++c) {
            double d = (*row)[c] - p.mean[c];
            p.std[c] += d * d;
        }
    }
    for (std::size_t c = 0; c < cols; ++c) {
        p.std[c] = std::sqrt(p.std[c] / static_cast<double>(in_window.size()));
        if (p.std[c] < 1e-12) {
            p.std[c] = 1.0;
            p.degenerate[c] = true;
        }
    }
    return p;
}

EmbeddingFile load_embeddings(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    int dim = 0;
    bool normalized = false;
    if (lines.empty() ||
        std::sscanf(lines[0].c_str(), "# dim=%d normalized=%*s", &dim) != 1 || dim <= 0) {
        throw ValidationError(path + ": expected header '# dim=<d> normalized=<true|false>'");
    }
    if (lines[0].find("normalized=true") != std::string::npos) {
        normalized = true;
    } else if (lines[0].find("normalized=false") == std::string::npos) {
        throw ValidationError(path + ": normalized flag must be 'true' or 'false'");
    }
    EmbeddingFile file;
    file.dim = dim;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        const std::string ctx = path + ":" + std::to_string(i + 1);
        auto f = split_csv_line(lines[i]);
        EmbeddingRecord rec;
        rec.date = Date::parse(f[0]);
        if (static_cast<int>(f.size()) - 1 != dim) {
            throw ValidationError(ctx + ": vector at " + rec.date.to_string() + " has dimension " +
                                  std::to_string(f.size() - 1) + ", file declares " +
                                  std::to_string(dim));
        }
        rec.vector.reserve(dim);
        for (int c = 0; c < dim; ++c) {
            rec.vector.push_back(parse_double(f[1 + c], ctx));
        }
        if (!normalized) {
            double n2 = 0;
            for (double v : rec.vector) {
                n2 += v * v;
            }
            double n = std::sqrt(n2);
            if (n < 1e-12) {
                throw ValidationError(ctx + ": zero vector at " + rec.date.to_string() +
                                      " cannot be normalized");
            }
            for (double& v : rec.vector) {
                v /= n;
            }
        }
        file.records.push_back(std::move(rec));
    }
    std::sort(file.records.begin(), file.records.end(),
              [](const EmbeddingRecord& a, const EmbeddingRecord& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < file.records.size(); ++i) {
        if (file.records[i].date == file.records[i - 1].date) {
            throw ValidationError(path + ": duplicate date " + file.records[i].date.to_string());
        }
    }
    return file;
}

SentimentTable load_sentiment_csv(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) {
        throw ValidationError(path + ": empty sentiment file");
    }
    auto header = split_csv_line(lines[0]);
    if (header.size() < 2 || header[0] != "date") {
        throw ValidationError(path + ": expected header 'date,<col>,...'");
    }
    SentimentTable table;
    table.columns.assign(header.begin() + 1, header.end());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        const std::string ctx = path + ":" + std::to_string(i + 1);
        auto f = split_csv_line(lines[i]);
        if (f.size() != header.size()) {
            throw ValidationError(ctx + ": field count mismatch");
        }
        std::vector<double> vals;
        for (std::size_t c = 1; c < f.size(); ++c) {
            vals.push_back(parse_double(f[c], ctx));
        }
        table.rows[Date::parse(f[0])] = std::move(vals);
    }
    return table;
}

AlignedDataset align(const std::vector<PriceBar>& bars,
                     const std::map<std::string, DailySeries>& macro_daily,
                     const EmbeddingFile& embeddings, const SentimentTable& sentiment,
                     const FeatureSpec& spec, const BusinessCalendar& calendar, Date span_begin,
                     Date span_end, AlignReport* report) {
    std::map<Date, std::size_t> bar_index;
    for (std::size_t i = 0; i < bars.size(); ++i) {
        bar_index[bars[i].date] = i;
    }
    std::map<Date, const std::vector<double>*> emb_by_date;
    for (const auto& rec : embeddings.records) {
        emb_by_date[rec.date] = &rec.vector;
    }

    AlignReport rep;
    AlignedDataset ds;
    ds.text_dim = embeddings.dim;
    ds.macro_dim = static_cast<int>(macro_daily.size());
    ds.num_dim = spec.length();
    for (const auto& [id, series] : macro_daily) {
        (void)series;
        ds.macro_ids.push_back(id);
    }

    for (Date t : calendar.business_days(span_begin, span_end)) {
        auto bi = bar_index.find(t);
        if (bi == bar_index.end()) {
            continue; // non-trading business day: not an aligned candidate
        }
        const std::size_t idx = bi->second;

        // text: previous business day's embedding
        Date prev = calendar.previous_business_day(t);
        auto emb = emb_by_date.find(prev);
        if (emb == emb_by_date.end()) {
            ++rep.dropped_missing_embedding;
            continue;
        }

        // macro: lag-adjusted values as of t
        std::vector<double> z;
        z.reserve(macro_daily.size());
        bool macro_ok = true;
        for (const auto& [id, series] : macro_daily) {
            (void)id;
            auto it = series.find(t);
            if (it == series.end()) {
                macro_ok = false;
                break;
            }
            z.push_back(it->second);
        }
        if (!macro_ok) {
            ++rep.dropped_missing_macro;
            continue;
        }

        // numeric features, sentiment row keyed to the previous business day
        const std::vector<double>* srow = nullptr;
        if (!spec.sentiment_columns.empty()) {
            auto sit = sentiment.rows.find(prev);
            if (sit != sentiment.rows.end()) {
                srow = &sit->second;
            }
        }
        auto x = build_numeric_vector(bars, idx, srow, spec);
        if (!x) {
            ++rep.dropped_missing_numeric;
            continue;
        }

        auto label = make_label(bars, idx);
        if (!label) {
            ++rep.dropped_missing_label;
            continue;
        }

        AlignedRecord rec;
        rec.date = t;
        rec.x_num = std::move(*x);
        rec.t_vec = *emb->second;
        rec.z_vec = std::move(z);
        rec.label = *label;
        rec.fwd_return = bars[idx + 1].close / bars[idx].close - 1.0;
        ds.records.push_back(std::move(rec));
        ++rep.kept;
    }
    if (report) {
        *report = rep;
    }
    if (ds.records.empty()) {
        throw ValidationError("align: zero aligned rows in span " + span_begin.to_string() + ".." +
                              span_end.to_string());
    }
    return ds;
}

void save_aligned(const AlignedDataset& ds, const std::string& path) {
    std::ostringstream out;
    out << "# mcast-aligned v1 num=" << ds.num_dim << " text=" << ds.text_dim
        << " macro=" << ds.macro_dim << " rows=" << ds.records.size() << "\n# macro_ids=";
    for (std::size_t i = 0; i < ds.macro_ids.size(); ++i) {
        out << (i ? "," : "") << ds.macro_ids[i];
    }
    out << "\n";
    for (const auto& r : ds.records) {
        out << r.date.to_string() << "," << r.label << "," << format_double(r.fwd_return);
        for (double v : r.x_num) out << "," << format_double(v);
        for (double v : r.t_vec) out << "," << format_double(v);
        for (double v : r.z_vec) out << "," << format_double(v);
        out << "\n";
    }
    write_file(path, out.str());
}

AlignedDataset load_aligned(const std::string& path) {
    std::vector<std::string> lines = read_lines(path);
    AlignedDataset ds;
    int rows = 0;
    if (lines.size() < 2 ||
        std::sscanf(lines[0].c_str(), "# mcast-aligned v1 num=%d text=%d macro=%d rows=%d",
                    &ds.num_dim, &ds.text_dim, &ds.macro_dim, &rows) != 4) {
        throw ValidationError(path + ": not an aligned dataset file");
    }
    if (lines[1].rfind("# macro_ids=", 0) != 0) {
        throw ValidationError(path + ": missing macro_ids header");
    }
    std::string ids = lines[1].substr(12);
    if (!ids.empty()) {
        for (const auto& id : split_csv_line(ids)) {
            ds.macro_ids.push_back(id);
        }
    }
    for (std::size_t i = 2; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            continue;
        }
        const std::string ctx = path + ":" + std::to_string(i + 1);
        auto f = split_csv_line(lines[i]);
        const std::size_t expected = 3 + ds.num_dim + ds.text_dim + ds.macro_dim;
        if (f.size() != expected) {
            throw ValidationError(ctx + ": expected " + std::to_string(expected) + " fields");
        }
        AlignedRecord r;
        r.date = Date::parse(f[0]);
        r.label = static_cast<int>(parse_double(f[1], ctx));
        r.fwd_return = parse_double(f[2], ctx);
        std::size_t k = 3;
        for (int c = 0; c < ds.num_dim; ++c) r.x_num.push_back(parse_double(f[k++], ctx));
        for (int c = 0; c < ds.text_dim; ++c) r.t_vec.push_back(parse_double(f[k++], ctx));
        for (int c = 0; c < ds.macro_dim; ++c) r.z_vec.push_back(parse_double(f[k++], ctx));
        ds.records.push_back(std::move(r));
    }
    if (static_cast<int>(ds.records.size()) != rows) {
        throw ValidationError(path + ": row count mismatch with header");
    }
    return ds;
}

} // namespace mcast
