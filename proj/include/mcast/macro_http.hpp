#pragma once

#include <optional>
#include <string>

#include "mcast/calendar_io.hpp"

namespace mcast {

// FRED-style observations endpoint. The service is optional at runtime:
// every fetched series has a load-from-CSV twin in calendar_io.
struct MacroHttpClient {
    std::string base_url; // e.g. "https://api.stlouisfed.org"
    std::string api_key;  // typically from an environment variable

    // GET <base_url>/fred/series/observations?series_id=...&api_key=...
    //     &file_type=json&observation_start=...&observation_end=...
    // Missing-value placeholders ('.') are skipped and counted; HTTP
    // failures raise RetryableError with the status, bad payloads raise
    // ValidationError.
    MacroSeries fetch_macro_series(const std::string& series_id, Date range_begin, Date range_end,
                                   std::optional<int> release_lag_bd = std::nullopt) const;
};

// Parse the service's standard observation JSON into a MacroSeries.
MacroSeries parse_observation_json(const std::string& body, const std::string& series_id,
                                   std::optional<int> release_lag_bd = std::nullopt);

} // namespace mcast
