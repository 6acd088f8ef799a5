#include "mcast/macro_http.hpp"

#include <json.hpp>

#define CPPHTTPLIB_NO_EXCEPTIONS_SUPPRESSION
#include <httplib.h>

#include "mcast/errors.hpp"
#include "mcast/io_util.hpp"

namespace mcast {

MacroSeries parse_observation_json(const std::string& body, const std::string& series_id,
                                   std::optional<int> release_lag_bd) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("macro fetch: unparseable payload: " + std::string(e.what()));
    }
    if (!j.contains("observations") || !j["observations"].is_array()) {
        throw ValidationError("macro fetch: payload has no 'observations' array");
    }
    MacroSeries series;
    series.series_id = series_id;
    series.release_lag_bd = release_lag_bd.value_or(default_release_lag(series_id));
    for (const auto& obs : j["observations"]) {
        std::string value = obs.at("value").get<std::string>();
        if (value == ".") {
            ++series.skipped_missing;
            continue;
        }
        MacroObservation o;
        o.reference_date = Date::parse(obs.at("date").get<std::string>());
        o.value = parse_double(value, "macro fetch " + series_id);
        if (!series.observations.empty() &&
            o.reference_date <= series.observations.back().reference_date) {
            throw ValidationError("macro fetch: observation dates not strictly increasing");
        }
        series.observations.push_back(o);
    }
    return series;
}

MacroSeries MacroHttpClient::fetch_macro_series(const std::string& series_id, Date range_begin,
                                                Date range_end,
                                                std::optional<int> release_lag_bd) const {
    httplib::Client client(base_url);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    httplib::Params params{{"series_id", series_id},
                           {"api_key", api_key},
                           {"file_type", "json"},
                           {"observation_start", range_begin.to_string()},
                           {"observation_end", range_end.to_string()}};
    auto res = client.Get("/fred/series/observations", params, httplib::Headers{});
    if (!res) {
        throw RetryableError("macro fetch: no response from " + base_url, 0);
    }
    if (res->status != 200) {
        throw RetryableError("macro fetch: HTTP " + std::to_string(res->status) + " for " +
                                 series_id,
                             res->status);
    }
    return parse_observation_json(res->body, series_id, release_lag_bd);
}

} // namespace mcast
