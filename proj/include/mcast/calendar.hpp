#pragma once

#include <vector>

#include "mcast/date.hpp"

namespace mcast {

// Business-day calendar: a weekday mask plus an explicit holiday list.
// Default is Monday-Friday with no holidays.
class BusinessCalendar {
  public:
    BusinessCalendar();
    BusinessCalendar(std::vector<int> weekmask, std::vector<Date> holidays);

    bool is_business_day(Date d) const;
    Date next_business_day(Date d) const;     // first business day strictly after d
    Date previous_business_day(Date d) const; // first business day strictly before d

    // Move n business days forward (n > 0) or backward (n < 0) from an
    // arbitrary anchor. n = 0 returns the anchor unchanged. Total for any
    // anchor date, business day or not.
    Date add_business_days(Date anchor, int n) const;

    std::vector<Date> business_days(Date begin, Date end) const; // inclusive span

    const std::vector<Date>& holidays() const { return holidays_; }

  private:
    bool weekmask_[7] = {};
    std::vector<Date> holidays_; // sorted, unique, all on weekmask days
};

} // namespace mcast
