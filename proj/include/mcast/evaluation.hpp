#pragma once

#include <vector>

namespace mcast {

struct ClassificationMetrics {
    double accuracy = 0, precision = 0, recall = 0, f1 = 0, mcc = 0, auroc = 0;
    // degenerate-denominator flags (metric reported as 0)
    bool precision_flag = false, recall_flag = false, f1_flag = false, mcc_flag = false,
         auroc_flag = false;
};

struct FinancialMetrics {
    double profit_factor = 0;
    bool profit_factor_inf = false; // no losing days
    double win_rate = 0;
    bool win_rate_flag = false; // all returns zero
    double sharpe_252 = 0;
    bool sharpe_flag = false; // zero return dispersion
};

struct RobustnessDeltas {
    double delta_f1 = 0;     // f1_cv - f1_ood
    double delta_sharpe = 0; // sharpe_cv - sharpe_ood
};

// r_strat(t) = position(t) * asset_return(t), positions in {-1,+1}.
std::vector<double> strategy_returns(const std::vector<int>& positions,
                                     const std::vector<double>& asset_returns);

// Confusion-matrix metrics plus rank-statistic AUROC (ties contribute 1/2).
ClassificationMetrics classification_metrics(const std::vector<int>& labels,
                                             const std::vector<int>& predictions,
                                             const std::vector<double>& probabilities);

// PF = gross gains / gross losses; win rate over nonzero-return days;
// Sharpe_252 = sqrt(252) * mean / population std.
FinancialMetrics financial_metrics(const std::vector<double>& strategy_returns);

RobustnessDeltas robustness_deltas(double f1_cv, double sharpe_cv, double f1_ood,
                                   double sharpe_ood);

} // namespace mcast
