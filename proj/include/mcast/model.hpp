#pragma once

#include <string>
#include <vector>

#include "mcast/calendar_io.hpp"

namespace mcast {

struct TrainConfig {
    double learning_rate = 0.1;
    double l2_lambda = 1e-4;
    int max_epochs = 5000;
    double tolerance = 1e-7;
    long seed = 0; // retained for provenance; training itself is deterministic
};

// Named feature segments so weights stay interpretable and bundles remain
// self-describing.
struct FeatureLayout {
    int x_num_dim = 0;
    int r_dim = 0; // contextual-memory segment; 0 when the preset has none
    int extra_dim = 0; // direct text/macro features for non-retrieval presets
    int total() const { return x_num_dim + r_dim + extra_dim; }
};

struct ModelParams {
    std::vector<double> weights;
    double bias = 0;
    ScalerParams feature_scaler; // over the x_num segment
    FeatureLayout layout;
};

struct FoldSplit {
    int fold_index = 0;    // 1..k
    std::size_t train_end = 0; // train on [0, train_end)
    std::size_t test_begin = 0, test_end = 0;
};

struct TrainLogRow {
    int epoch;
    double loss;
    double grad_norm;
};

// Expanding-window chronological splits: test_size = floor(n/(k+1)); fold i
// trains on [0, n - (k-i+1)*test_size) and tests on the next test_size rows.
std::vector<FoldSplit> time_series_split(std::size_t n, int k = 5);

// Mean log-loss + (l2_lambda/2)*||W||^2 and its gradient; shared by the
// trainer and the finite-difference tests.
double logistic_loss(const std::vector<std::vector<double>>& features,
                     const std::vector<int>& labels, const std::vector<double>& weights,
                     double bias, double l2_lambda);
void logistic_gradient(const std::vector<std::vector<double>>& features,
                       const std::vector<int>& labels, const std::vector<double>& weights,
                       double bias, double l2_lambda, std::vector<double>& grad_w,
                       double& grad_b);

// Full-batch gradient descent from zero-initialized parameters. Features
// must already be scaled.
ModelParams train_logistic(const std::vector<std::vector<double>>& features,
                           const std::vector<int>& labels, const TrainConfig& config,
                           std::vector<TrainLogRow>* log = nullptr);

double sigmoid(double z);
double predict_proba(const ModelParams& params, const std::vector<double>& features);
int predict_position(double p_hat, double threshold = 0.5); // -1 or +1, ties long

std::string train_log_csv(const std::vector<TrainLogRow>& log);

} // namespace mcast
