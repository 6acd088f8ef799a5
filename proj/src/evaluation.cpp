#include "mcast/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mcast/errors.hpp"

namespace mcast {

std::vector<double> strategy_returns(const std::vector<int>& positions,
                                     const std::vector<double>& asset_returns) {
    if (positions.size() != asset_returns.size()) {
        throw ValidationError("strategy_returns: length mismatch");
    }
    std::vector<double> out(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        out[i] = positions[i] * asset_returns[i];
    }
    return out;
}

ClassificationMetrics classification_metrics(const std::vector<int>& labels,
                                             const std::vector<int>& predictions,
                                             const std::vector<double>& probabilities) {
    const std::size_t n = labels.size();
    if (n == 0 || predictions.size() != n || probabilities.size() != n) {
        throw ValidationError("classification_metrics: empty or mismatched inputs");
    }
    double tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] == 1) {
            predictions[i] == 1 ? ++tp : ++fn;
        } else {
            predictions[i] == 1 ? ++fp : ++tn;
        }
    }
    ClassificationMetrics m;
    m.accuracy = (tp + tn) / static_cast<double>(n);

    if (tp + fp > 0) {
        m.precision = tp / (tp + fp);
    } else {
        m.precision_flag = true;
    }
    if (tp + fn > 0) {
        m.recall = tp / (tp + fn);
    } else {
        m.recall_flag = true;
    }
    if (m.precision + m.recall > 0) {
        m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
    } else {
        m.f1_flag = true; // no true positive anywhere in sight
    }

    const double denom2 = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn);
    if (denom2 > 0) {
        m.mcc = (tp * tn - fp * fn) / std::sqrt(denom2);
    } else {
        m.mcc_flag = true;
    }

    // Mann-Whitney formulation: ties contribute 1/2.
    double pos = tp + fn, neg = tn + fp;
    if (pos > 0 && neg > 0) {
        double u = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (labels[i] != 1) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                if (labels[j] == 1) {
                    continue;
                }
                if (probabilities[i] > probabilities[j]) {
                    u += 1.0;
                } else if (probabilities[i] == probabilities[j]) {
                    u += 0.5;
                }
            }
        }
        m.auroc = u / (pos * neg);
    } else {
        m.auroc_flag = true;
    }
    return m;
}

FinancialMetrics financial_metrics(const std::vector<double>& strategy_returns) {
    const std::size_t n = strategy_returns.size();
    if (n < 2) {
        throw ValidationError("financial_metrics: need >= 2 return observations");
    }
    FinancialMetrics m;
    double gains = 0, losses = 0;
    std::size_t wins = 0, nonzero = 0;
    for (double r : strategy_returns) {
        if (r > 0) {
            gains += r;
            ++wins;
            ++nonzero;
        } else if (r < 0) {
            losses += -r;
            ++nonzero;
        }
    }
    if (losses > 0) {
        m.profit_factor = gains / losses;
    } else {
        m.profit_factor_inf = true;
        m.profit_factor = 0;
    }
    if (nonzero > 0) {
        m.win_rate = static_cast<double>(wins) / static_cast<double>(nonzero);
    } else {
        m.win_rate_flag = true;
    }
    double mean = std::accumulate(strategy_returns.begin(), strategy_returns.end(), 0.0) /
                  static_cast<double>(n);
    double var = 0;
    for (double r : strategy_returns) {
        var += (r - mean) * (r - mean);
    }
    double sd = std::sqrt(var / static_cast<double>(n));
    if (sd < 1e-12) {
        m.sharpe_flag = true;
    } else {
        m.sharpe_252 = std::sqrt(252.0) * mean / sd;
    }
    return m;
}

RobustnessDeltas robustness_deltas(double f1_cv, double sharpe_cv, double f1_ood,
                                   double sharpe_ood) {
    return {f1_cv - f1_ood, sharpe_cv - sharpe_ood};
}

} // namespace mcast
