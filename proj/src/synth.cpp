#include "mcast/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "mcast/errors.hpp"
#include "mcast/fusion.hpp"
#include "mcast/io_util.hpp"
#include "mcast/pipeline.hpp"

namespace mcast {

std::uint64_t SynthRng::next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double SynthRng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SynthRng::normal() {
    // Box-Muller, uncached
    double u1 = uniform();
    while (u1 <= 0) {
        u1 = uniform();
    }
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

namespace {

std::vector<double> unit(int dim, int axis) {
    std::vector<double> v(dim, 0.0);
    v[axis] = 1.0;
    return v;
}

std::vector<double> blend(int dim, int a, double wa, int b, double wb) {
    std::vector<double> v(dim, 0.0);
    v[a] = wa;
    v[b] = wb;
    return l2_normalize(v);
}

} // namespace

std::vector<RegimeSpec> default_regime_specs(int text_dim, int macro_dim) {
    if (text_dim < 8 || macro_dim < 1) {
        throw ValidationError("default_regime_specs: need text_dim >= 8");
    }
    // Style centers on axes 0..2; the shifted regime's language mimics
    // regime 1. Narrative signal axes share component e4 so that sign
    // agreement survives cross-regime retrieval.
    auto sig = [&](int own_axis) { return blend(text_dim, 4, 1.0, own_axis, 1.0); };
    std::vector<RegimeSpec> specs(4);
    const double means[4] = {0.0, 4.0, 8.0, -4.0};
    const int polarity[4] = {-1, +1, -1, -1};
    for (int r = 0; r < 4; ++r) {
        RegimeSpec& s = specs[r];
        s.id = r;
        s.macro_mean.assign(macro_dim, means[r]);
        s.macro_noise_std = 0.2;
        s.text_noise_std = 0.1;
        s.signal_scale = 0.8;
        s.up_prob_pos_signal = polarity[r] > 0 ? 0.8 : 0.2;
        s.up_prob_neg_signal = polarity[r] > 0 ? 0.2 : 0.8;
        s.sentiment_polarity = polarity[r];
    }
    specs[0].text_cluster_center = unit(text_dim, 0);
    specs[1].text_cluster_center = unit(text_dim, 1);
    specs[2].text_cluster_center = unit(text_dim, 2);
    specs[3].text_cluster_center = blend(text_dim, 1, 0.9, 3, std::sqrt(1.0 - 0.81));
    specs[0].signal_axis = sig(5);
    specs[1].signal_axis = sig(6);
    specs[2].signal_axis = sig(7);
    specs[3].signal_axis = specs[1].signal_axis; // same narrative pattern...
    specs[3].sentiment_polarity = +1;            // ...misread as bullish language
    return specs;
}

std::vector<int> default_schedule(std::size_t n_days, std::size_t n_regimes) {
    if (n_regimes < 2) {
        throw ValidationError("default_schedule: need >= 2 regimes");
    }
    std::vector<int> schedule(n_days);
    const std::size_t shifted = n_days / 4;
    const std::size_t train_days = n_days - shifted;
    const std::size_t per = train_days / (n_regimes - 1);
    for (std::size_t i = 0; i < n_days; ++i) {
        if (i >= train_days) {
            schedule[i] = static_cast<int>(n_regimes) - 1;
        } else {
            schedule[i] = static_cast<int>(std::min(i / per, n_regimes - 2));
        }
    }
    return schedule;
}

SyntheticDataset generate(const std::vector<RegimeSpec>& specs, const std::vector<int>& schedule,
                          std::size_t n_days, std::uint64_t seed, Date start_date) {
    if (specs.size() < 2) {
        throw ValidationError("generate: need >= 2 regimes");
    }
    if (schedule.size() < n_days) {
        throw ValidationError("generate: schedule does not cover n_days");
    }
    for (std::size_t i = 0; i < n_days; ++i) {
        if (schedule[i] < 0 || schedule[i] >= static_cast<int>(specs.size())) {
            throw ValidationError("generate: schedule references unknown regime " +
                                  std::to_string(schedule[i]));
        }
    }
    // identifiable-regimes invariant
    for (std::size_t a = 0; a < specs.size(); ++a) {
        for (std::size_t b = a + 1; b < specs.size(); ++b) {
            double d2 = 0;
            for (std::size_t k = 0; k < specs[a].macro_mean.size(); ++k) {
                double d = specs[a].macro_mean[k] - specs[b].macro_mean[k];
                d2 += d * d;
            }
            double min_sep = 4.0 * std::max(specs[a].macro_noise_std, specs[b].macro_noise_std);
            if (std::sqrt(d2) < min_sep) {
                throw ValidationError("generate: regimes " + std::to_string(specs[a].id) + " and " +
                                      std::to_string(specs[b].id) + " are not separable");
            }
        }
    }

    SyntheticDataset ds;
    ds.specs = specs;
    ds.schedule.assign(schedule.begin(), schedule.begin() + n_days);
    ds.seed = seed;
    SynthRng rng(seed);
    BusinessCalendar calendar;
    const int d = specs[0].text_cluster_center.empty()
                      ? 0
                      : static_cast<int>(specs[0].text_cluster_center.size());
    const int p = static_cast<int>(specs[0].macro_mean.size());

    Date date = calendar.is_business_day(start_date) ? start_date
                                                     : calendar.next_business_day(start_date);
    double open = 100.0;
    for (std::size_t i = 0; i < n_days; ++i) {
        const RegimeSpec& spec = specs[schedule[i]];
        SyntheticDay day;
        day.date = date;
        day.regime = spec.id;
        day.signal = rng.sign();
        double up_prob = day.signal > 0 ? spec.up_prob_pos_signal : spec.up_prob_neg_signal;
        day.label = rng.bernoulli(up_prob) ? 1 : 0;

        day.macro.resize(p);
        for (int k = 0; k < p; ++k) {
            day.macro[k] = spec.macro_mean[k] + spec.macro_noise_std * rng.normal();
        }
        std::vector<double> t(d);
        for (int k = 0; k < d; ++k) {
            t[k] = spec.text_cluster_center[k] + day.signal * spec.signal_scale * spec.signal_axis[k] +
                   spec.text_noise_std * rng.normal();
        }
        day.text = l2_normalize(t);
        day.sentiment = day.signal * spec.sentiment_polarity + 2.0 * rng.normal();

        PriceBar& bar = day.bar;
        bar.date = date;
        bar.open = open;
        bar.close = open * (1.0 + 0.003 * rng.normal());
        bar.high = std::max(bar.open, bar.close) * (1.0 + 0.002 * rng.uniform());
        bar.low = std::min(bar.open, bar.close) * (1.0 - 0.002 * rng.uniform());
        bar.volume = 1e6 * (1.0 + 0.2 * rng.uniform());

        // next-day open realizes the label relative to today's close, so
        // close-to-close returns carry the labeled drift
        double gap = 0.004 + 0.004 * rng.uniform();
        open = bar.close * (day.label == 1 ? 1.0 + gap : 1.0 - gap);
        ds.days.push_back(std::move(day));
        date = calendar.next_business_day(date);
    }
    return ds;
}

SyntheticFiles write_dataset_files(const SyntheticDataset& ds, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    BusinessCalendar calendar;
    SyntheticFiles files;

    std::ostringstream prices;
    prices << "date,open,high,low,close,volume\n";
    for (const auto& day : ds.days) {
        const PriceBar& b = day.bar;
        prices << b.date.to_string() << "," << format_double(b.open) << ","
               << format_double(b.high) << "," << format_double(b.low) << ","
               << format_double(b.close) << "," << format_double(b.volume) << "\n";
    }
    files.price_csv = dir + "/prices.csv";
    write_file(files.price_csv, prices.str());

    // Day i's text/sentiment describe the previous evening's news, so they
    // are keyed to the prior business day -- exactly how the ingestion path
    // lags them back in.
    const int d = static_cast<int>(ds.days.front().text.size());
    std::ostringstream emb, sent;
    emb << "# dim=" << d << " normalized=true\n";
    sent << "date,synth_sent\n";
    for (const auto& day : ds.days) {
        Date key = calendar.previous_business_day(day.date);
        emb << key.to_string();
        for (double v : day.text) {
            emb << "," << format_double(v);
        }
        emb << "\n";
        sent << key.to_string() << "," << format_double(day.sentiment) << "\n";
    }
    files.embeddings_file = dir + "/embeddings.csv";
    write_file(files.embeddings_file, emb.str());
    files.sentiment_csv = dir + "/sentiment.csv";
    write_file(files.sentiment_csv, sent.str());

    const int p = static_cast<int>(ds.days.front().macro.size());
    for (int k = 0; k < p; ++k) {
        std::string id = "SYNM" + std::to_string(k + 1);
        std::ostringstream m;
        m << "date,value\n";
        for (const auto& day : ds.days) {
            m << day.date.to_string() << "," << format_double(day.macro[k]) << "\n";
        }
        std::string path = dir + "/" + id + ".csv";
        write_file(path, m.str());
        files.macro_csv[id] = path;
    }
    return files;
}

RegimeShiftResult regime_shift_experiment(const SyntheticDataset& ds, const std::string& out_dir,
                                          const TrainConfig& train) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    const int shifted_regime = ds.schedule.back();
    std::size_t shift_begin = ds.schedule.size();
    while (shift_begin > 0 && ds.schedule[shift_begin - 1] == shifted_regime) {
        --shift_begin;
    }
    if (shift_begin == 0 || ds.schedule.size() - shift_begin < 30) {
        throw ValidationError("regime_shift_experiment: shifted segment shorter than 30 days");
    }

    SyntheticFiles files = write_dataset_files(ds, out_dir + "/data");

    RunConfig base;
    base.price_csv = files.price_csv;
    base.embeddings_file = files.embeddings_file;
    base.sentiment_csv = files.sentiment_csv;
    base.macro_csv = files.macro_csv;
    base.features.sentiment_columns = {"synth_sent"};
    base.train = train;
    base.has_windows = true;
    base.has_ood = true;
    base.train_begin = ds.days.front().date;
    base.train_end = ds.days[shift_begin - 1].date;
    base.ood_begin = ds.days[shift_begin].date;
    base.ood_end = ds.days.back().date;
    base.output_dir = out_dir;
    base.aligned_file = out_dir + "/aligned.csv";

    IngestResult ingested = ingest(base);
    save_aligned(ingested.dataset, base.aligned_file);

    RegimeShiftResult result;
    std::ostringstream table;
    table << "preset,acc_cv,f1_cv,sharpe_cv,acc_ood,f1_ood,sharpe_ood,delta_f1,delta_sharpe\n";
    for (Preset preset : all_presets()) {
        RunConfig cfg = base;
        cfg.preset = preset;
        const std::string stem = out_dir + "/" + preset_name(preset);
        FrozenBundle bundle =
            freeze(ingested.dataset, cfg, stem + ".bundle.json", stem + ".index");
        std::vector<AlignedRecord> ood = slice_window(ingested.dataset, cfg.ood_begin, cfg.ood_end);
        EvaluationReport ood_rep = evaluate_ood(bundle, ood, cfg);
        save_report(bundle.cv_report, stem + ".cv.json");
        save_report(ood_rep, stem + ".ood.json");
        const std::string name = preset_name(preset);
        result.cv[name] = bundle.cv_report;
        result.ood[name] = ood_rep;
        table << name << "," << format_double(bundle.cv_report.classification.accuracy) << ","
              << format_double(bundle.cv_report.classification.f1) << ","
              << format_double(bundle.cv_report.financial.sharpe_252) << ","
              << format_double(ood_rep.classification.accuracy) << ","
              << format_double(ood_rep.classification.f1) << ","
              << format_double(ood_rep.financial.sharpe_252) << ","
              << format_double(ood_rep.deltas.delta_f1) << ","
              << format_double(ood_rep.deltas.delta_sharpe) << "\n";
    }
    result.delta_table_csv = table.str();
    write_file(out_dir + "/deltas.csv", result.delta_table_csv);
    return result;
}

} // namespace mcast
