#include "mcast/date.hpp"

#include <cctype>
#include <cstdio>

#include "mcast/errors.hpp"

namespace mcast {

namespace {

std::int32_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int>(doe) - 719468;
}

void civil_from_days(std::int32_t z, int& y, int& m, int& d) {
    z += 719468;
    const int era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int yr = static_cast<int>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = yr + (m <= 2);
}

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int n[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && leap(y) ? 29 : n[m - 1];
}

} // namespace

Date::Date(int year, int month, int day) : serial_(days_from_civil(year, month, day)) {
    if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month)) {
        throw ValidationError("Date: invalid civil date " + std::to_string(year) + "-" +
                              std::to_string(month) + "-" + std::to_string(day));
    }
}

Date Date::parse(const std::string& iso) {
    bool ok = iso.size() == 10 && iso[4] == '-' && iso[7] == '-';
    for (std::size_t i = 0; ok && i < iso.size(); ++i) {
        if (i != 4 && i != 7 && !std::isdigit(static_cast<unsigned char>(iso[i]))) ok = false;
    }
    if (!ok) {
        throw ValidationError("Date: cannot parse '" + iso + "' (expected YYYY-MM-DD)");
    }
    return Date(std::stoi(iso.substr(0, 4)), std::stoi(iso.substr(5, 2)),
                std::stoi(iso.substr(8, 2)));
}

std::string Date::to_string() const {
    int y, m, d;
    to_civil(y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
    return buf;
}

int Date::weekday() const {
    // 1970-01-01 was a Thursday (index 3).
    std::int32_t w = (serial_ + 3) % 7;
    return w < 0 ? w + 7 : w;
}

void Date::to_civil(int& year, int& month, int& day) const {
    civil_from_days(serial_, year, month, day);
}

} // namespace mcast
