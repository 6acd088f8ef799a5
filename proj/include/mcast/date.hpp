#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace mcast {

// Calendar date stored as days since 1970-01-01 (proleptic Gregorian).
// Cheap to copy and totally ordered; conversion uses Howard Hinnant's
// civil-day algorithms.
class Date {
  public:
    Date() = default;
    explicit Date(std::int32_t serial) : serial_(serial) {}
    Date(int year, int month, int day);

    static Date parse(const std::string& iso); // "YYYY-MM-DD"
    std::string to_string() const;

    std::int32_t serial() const { return serial_; }
    // 0 = Monday ... 6 = Sunday
    int weekday() const;

    void to_civil(int& year, int& month, int& day) const;

    Date operator+(int days) const { return Date(serial_ + days); }
    Date operator-(int days) const { return Date(serial_ - days); }
    int operator-(const Date& other) const { return serial_ - other.serial_; }
    auto operator<=>(const Date&) const = default;

  private:
    std::int32_t serial_ = 0;
};

} // namespace mcast
