#include "mcast/calendar.hpp"

#include <algorithm>
#include "mcast/errors.hpp"

namespace mcast {

BusinessCalendar::BusinessCalendar() : BusinessCalendar({0, 1, 2, 3, 4}, {}) {}

BusinessCalendar::BusinessCalendar(std::vector<int> weekmask, std::vector<Date> holidays)
    : holidays_(std::move(holidays)) {
    if (weekmask.empty()) {
        throw ValidationError("BusinessCalendar: empty weekmask");
    }
    for (int w : weekmask) {
        if (w < 0 || w > 6) {
            throw ValidationError("BusinessCalendar: weekday out of range");
        }
        weekmask_[w] = true;
    }
    std::sort(holidays_.begin(), holidays_.end());
    if (std::adjacent_find(holidays_.begin(), holidays_.end()) != holidays_.end()) {
        throw ValidationError("BusinessCalendar: duplicate holiday");
    }
    for (const Date& h : holidays_) {
        if (!weekmask_[h.weekday()]) {
            throw ValidationError("BusinessCalendar: holiday " + h.to_string() +
                                        " falls outside the weekmask");
        }
    }
}

bool BusinessCalendar::is_business_day(Date d) const {
    if (!weekmask_[d.weekday()]) {
        return false;
    }
    return !std::binary_search(holidays_.begin(), holidays_.end(), d);
}

Date BusinessCalendar::next_business_day(Date d) const {
    do {
        d = d + 1;
    } while (!is_business_day(d));
    return d;
}

Date BusinessCalendar::previous_business_day(Date d) const {
    do {
        d = d - 1;
    } while (!is_business_day(d));
    return d;
}

Date BusinessCalendar::add_business_days(Date anchor, int n) const {
    Date d = anchor;
    for (; n > 0; --n) {
        d = next_business_day(d);
    }
    for (; n < 0; ++n) {
        d = previous_business_day(d);
    }
    return d;
}

std::vector<Date> BusinessCalendar::business_days(Date begin, Date end) const {
    std::vector<Date> out;
    for (Date d = begin; d <= end; d = d + 1) {
        if (is_business_day(d)) {
            out.push_back(d);
        }
    }
    return out;
}

} // namespace mcast
