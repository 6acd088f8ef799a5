#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mcast/calendar_io.hpp"
#include "mcast/config.hpp"
#include "mcast/report.hpp"

namespace mcast {

// Deterministic RNG with platform-independent uniform/normal draws
// (mt19937_64 stream + explicit Box-Muller), so generated datasets are
// byte-identical everywhere.
class SynthRng {
  public:
    explicit SynthRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
    double uniform();                  // [0, 1)
    double normal();                   // standard normal
    int sign() { return uniform() < 0.5 ? -1 : 1; }
    bool bernoulli(double p) { return uniform() < p; }

  private:
    std::uint64_t next_u64();
    std::uint64_t state_;
};

// One market regime: where its macro state and news language live, and how
// the daily narrative signal maps to the next-day label.
struct RegimeSpec {
    int id = 0;
    std::vector<double> macro_mean; // dimension p
    double macro_noise_std = 0.2;
    std::vector<double> text_cluster_center; // dimension d, unit norm
    std::vector<double> signal_axis;         // dimension d, unit norm
    double signal_scale = 0.8;
    double text_noise_std = 0.1;
    // label rule: up-probability given the day's signal sign
    double up_prob_pos_signal = 0.8;
    double up_prob_neg_signal = 0.2;
    // how the (frozen) sentiment interpreter reads this regime's language:
    // +1 reads the signal correctly w.r.t. a bullish regime, -1 bearish
    int sentiment_polarity = 1;
};

struct SyntheticDay {
    Date date;
    int regime = 0;
    int signal = 0; // +1 / -1
    int label = 0;
    std::vector<double> macro;
    std::vector<double> text; // unit norm
    double sentiment = 0;
    PriceBar bar;
};

struct SyntheticDataset {
    std::vector<SyntheticDay> days;
    std::vector<RegimeSpec> specs;
    std::vector<int> schedule; // regime id per day
    std::uint64_t seed = 0;
};

// Three training regimes plus a shifted final regime whose macro state
// matches regime 0 while its news language mimics regime 1 -- the confound
// that text-only retrieval cannot resolve.
std::vector<RegimeSpec> default_regime_specs(int text_dim = 8, int macro_dim = 4);

// Equal thirds of the first three regimes, then the shifted regime for the
// last quarter of the span.
std::vector<int> default_schedule(std::size_t n_days, std::size_t n_regimes = 4);

SyntheticDataset generate(const std::vector<RegimeSpec>& specs, const std::vector<int>& schedule,
                          std::size_t n_days, std::uint64_t seed,
                          Date start_date = Date(2015, 1, 5));

// Write the dataset in the exact file formats the ingestion path consumes.
struct SyntheticFiles {
    std::string price_csv;
    std::string embeddings_file;
    std::string sentiment_csv;
    std::map<std::string, std::string> macro_csv; // series id -> path
};
SyntheticFiles write_dataset_files(const SyntheticDataset& ds, const std::string& dir);

struct RegimeShiftResult {
    std::map<std::string, EvaluationReport> cv;  // preset name -> report
    std::map<std::string, EvaluationReport> ood; // preset name -> report (with deltas)
    std::string delta_table_csv;
};

// Train on the unshifted schedule, evaluate frozen on the shifted segment,
// for all five presets.
RegimeShiftResult regime_shift_experiment(const SyntheticDataset& ds, const std::string& out_dir,
                                          const TrainConfig& train = TrainConfig{});

} // namespace mcast
