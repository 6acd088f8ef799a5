#include "mcast/features.hpp"

#include <cmath>

namespace mcast {

std::optional<double> lagged_return(const std::vector<PriceBar>& bars, std::size_t index,
                                    int lag) {
    if (lag < 1 || index >= bars.size() || static_cast<std::size_t>(lag) > index) {
        return std::nullopt;
    }
    return bars[index].close / bars[index - lag].close - 1.0;
}

std::optional<double> realized_vol(const std::vector<PriceBar>& bars, std::size_t index,
                                   int window) {
    if (window < 1 || index >= bars.size() || static_cast<std::size_t>(window) > index) {
        return std::nullopt;
    }
    // window daily simple returns ending at index
    double mean = 0.0;
    std::vector<double> rets(window);
    for (int i = 0; i < window; ++i) {
        std::size_t j = index - window + 1 + i;
        rets[i] = bars[j].close / bars[j - 1].close - 1.0;
        mean += rets[i];
    }
    mean /= window;
    double var = 0.0;
    for (double r : rets) {
        var += (r - mean) * (r - mean);
    }
    return std::sqrt(var / window);
}

std::optional<std::vector<double>> build_numeric_vector(const std::vector<PriceBar>& bars,
                                                        std::size_t index,
                                                        const std::vector<double>* sentiment_row,
                                                        const FeatureSpec& spec) {
    if (index >= bars.size()) {
        return std::nullopt;
    }
    std::vector<double> out;
    out.reserve(spec.length());
    if (spec.include_ohlcv) {
        const PriceBar& b = bars[index];
        out.insert(out.end(), {b.open, b.high, b.low, b.close, b.volume});
    }
    for (int lag : spec.return_lags) {
        auto r = lagged_return(bars, index, lag);
        if (!r) {
            return std::nullopt;
        }
        out.push_back(*r);
    }
    if (spec.vol_window > 0) {
        auto v = realized_vol(bars, index, spec.vol_window);
        if (!v) {
            return std::nullopt;
        }
        out.push_back(*v);
    }
    if (!spec.sentiment_columns.empty()) {
        if (sentiment_row == nullptr || sentiment_row->size() != spec.sentiment_columns.size()) {
            return std::nullopt;
        }
        out.insert(out.end(), sentiment_row->begin(), sentiment_row->end());
    }
    return out;
}

std::optional<int> make_label(const std::vector<PriceBar>& bars, std::size_t index) {
    if (index + 1 >= bars.size()) {
        return std::nullopt;
    }
    return bars[index + 1].open > bars[index].close ? 1 : 0;
}

} // namespace mcast
