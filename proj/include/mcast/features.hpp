#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcast/calendar_io.hpp"

namespace mcast {

// Numeric feature recipe; serialized into every report for reproducibility.
struct FeatureSpec {
    std::vector<int> return_lags = {1, 2, 5}; // business days
    int vol_window = 10;                      // business days
    bool include_ohlcv = true;
    std::vector<std::string> sentiment_columns;

    int length() const {
        return (include_ohlcv ? 5 : 0) + static_cast<int>(return_lags.size()) +
               (vol_window > 0 ? 1 : 0) + static_cast<int>(sentiment_columns.size());
    }
};

// close(t)/close(t - lag bd) - 1 over the bar sequence; absent when history
// is insufficient. `index` addresses the bar at date t within `bars`.
std::optional<double> lagged_return(const std::vector<PriceBar>& bars, std::size_t index, int lag);

// Population std of the trailing `window` daily simple returns ending at t.
std::optional<double> realized_vol(const std::vector<PriceBar>& bars, std::size_t index,
                                   int window);

// Fixed ordering: [OHLCV of day t, returns in lag order, realized vol,
// sentiment columns in spec order]. Absent when any component is absent.
std::optional<std::vector<double>> build_numeric_vector(const std::vector<PriceBar>& bars,
                                                        std::size_t index,
                                                        const std::vector<double>* sentiment_row,
                                                        const FeatureSpec& spec);

// 1 iff open(t+1 bar) > close(t bar); ties are 0. Absent on the final bar.
std::optional<int> make_label(const std::vector<PriceBar>& bars, std::size_t index);

} // namespace mcast
