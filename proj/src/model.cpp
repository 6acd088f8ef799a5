#include "mcast/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mcast/errors.hpp"
#include "mcast/io_util.hpp"

namespace mcast {

std::vector<FoldSplit> time_series_split(std::size_t n, int k) {
    if (k < 1) {
        throw ValidationError("time_series_split: k must be >= 1");
    }
    if (n < static_cast<std::size_t>(k) + 1) {
        throw ValidationError("time_series_split: need at least k+1 samples, got " +
                              std::to_string(n));
    }
    const std::size_t test_size = n / (k + 1);
    std::vector<FoldSplit> folds;
    for (int i = 1; i <= k; ++i) {
        FoldSplit f;
        f.fold_index = i;
        f.train_end = n - static_cast<std::size_t>(k - i + 1) * test_size;
        f.test_begin = f.train_end;
        f.test_end = f.train_end + test_size;
        folds.push_back(f);
    }
    return folds;
}

double sigmoid(double z) {
    if (z >= 0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

namespace {

double row_logit(const std::vector<double>& w, double b, const std::vector<double>& x) {
    double z = b;
    for (std::size_t i = 0; i < w.size(); ++i) {
        z += w[i] * x[i];
    }
    return z;
}

// log(1 + exp(z)) without overflow
double log1pexp(double z) {
    return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

} // namespace

double logistic_loss(const std::vector<std::vector<double>>& features,
                     const std::vector<int>& labels, const std::vector<double>& weights,
                     double bias, double l2_lambda) {
    double loss = 0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        double z = row_logit(weights, bias, features[i]);
        // -y*z + log(1+e^z)
        loss += log1pexp(z) - labels[i] * z;
    }
    loss /= static_cast<double>(features.size());
    double w2 = 0;
    for (double w : weights) {
        w2 += w * w;
    }
    return loss + 0.5 * l2_lambda * w2;
}

void logistic_gradient(const std::vector<std::vector<double>>& features,
                       const std::vector<int>& labels, const std::vector<double>& weights,
                       double bias, double l2_lambda, std::vector<double>& grad_w,
                       double& grad_b) {
    grad_w.assign(weights.size(), 0.0);
    grad_b = 0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        double err = sigmoid(row_logit(weights, bias, features[i])) - labels[i];
        for (std::size_t j = 0; j < weights.size(); ++j) {
            grad_w[j] += err * features[i][j];
        }
        grad_b += err;
    }
    const double inv_n = 1.0 / static_cast<double>(features.size());
    for (std::size_t j = 0; j < weights.size(); ++j) {
        grad_w[j] = grad_w[j] * inv_n + l2_lambda * weights[j];
    }
    grad_b *= inv_n;
}

ModelParams train_logistic(const std::vector<std::vector<double>>& features,
                           const std::vector<int>& labels, const TrainConfig& config,
                           std::vector<TrainLogRow>* log) {
    if (features.size() < 2 || features.size() != labels.size()) {
        throw ValidationError("train_logistic: need >= 2 labeled rows");
    }
    const bool has_pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
    const bool has_neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
    if (!has_pos || !has_neg) {
        throw ValidationError("train_logistic: labels contain a single class");
    }

    ModelParams p;
    p.weights.assign(features[0].size(), 0.0);
    p.bias = 0;
    std::vector<double> grad_w;
    double grad_b = 0;
    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        logistic_gradient(features, labels, p.weights, p.bias, config.l2_lambda, grad_w, grad_b);
        double gmax = std::abs(grad_b);
        for (double g : grad_w) {
            gmax = std::max(gmax, std::abs(g));
        }
        if (log) {
            double loss = logistic_loss(features, labels, p.weights, p.bias, config.l2_lambda);
            if (!std::isfinite(loss)) {
                throw ValidationError("train_logistic: non-finite loss at epoch " +
                                      std::to_string(epoch));
            }
            log->push_back({epoch, loss, gmax});
        }
        if (gmax < config.tolerance) {
            break;
        }
        for (std::size_t j = 0; j < p.weights.size(); ++j) {
            p.weights[j] -= config.learning_rate * grad_w[j];
        }
        p.bias -= config.learning_rate * grad_b;
        if (!std::isfinite(p.bias)) {
            throw ValidationError("train_logistic: diverged at epoch " + std::to_string(epoch));
        }
    }
    return p;
}

double predict_proba(const ModelParams& params, const std::vector<double>& features) {
    if (features.size() != params.weights.size()) {
        throw ValidationError("predict_proba: feature dimension mismatch (got " +
                              std::to_string(features.size()) + ", expected " +
                              std::to_string(params.weights.size()) + ")");
    }
    return sigmoid(row_logit(params.weights, params.bias, features));
}

int predict_position(double p_hat, double threshold) {
    return p_hat >= threshold ? 1 : -1;
}

std::string train_log_csv(const std::vector<TrainLogRow>& log) {
    std::ostringstream out;
    out << "epoch,loss,grad_norm\n";
    for (const auto& row : log) {
        out << row.epoch << "," << format_double(row.loss) << "," << format_double(row.grad_norm)
            << "\n";
    }
    return out.str();
}

} // namespace mcast
