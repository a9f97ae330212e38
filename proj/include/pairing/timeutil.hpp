#pragma once

#include <cstdint>
#include <string>

namespace pairing {

// Timestamps are UTC seconds since the Unix epoch.
using Timestamp = std::int64_t;

constexpr std::int64_t kSecondsPerDay = 86400;

// Days since 1970-01-01 for a proleptic Gregorian civil date.
constexpr std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct CivilDate {
    int year;
    int month;
    int day;
};

constexpr CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

constexpr Timestamp make_timestamp(int y, int m, int d, int hh = 0, int mm = 0, int ss = 0) {
    return days_from_civil(y, m, d) * kSecondsPerDay + hh * 3600 + mm * 60 + ss;
}

constexpr int days_in_month(int y, int m) {
    constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m != 2) return lengths[m - 1];
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
}

// Calendar month arithmetic; the day of month is clamped.
constexpr Timestamp add_months(Timestamp ts, int months) {
    const std::int64_t day = ts >= 0 ? ts / kSecondsPerDay
                                     : (ts - (kSecondsPerDay - 1)) / kSecondsPerDay;
    const std::int64_t tod = ts - day * kSecondsPerDay;
    CivilDate c = civil_from_days(day);
    int total = c.year * 12 + (c.month - 1) + months;
    const int y = total >= 0 ? total / 12 : (total - 11) / 12;
    const int m = total - y * 12 + 1;
    const int d = c.day <= days_in_month(y, m) ? c.day : days_in_month(y, m);
    return days_from_civil(y, m, d) * kSecondsPerDay + tod;
}

std::string format_iso8601(Timestamp ts);

// Accepts "YYYY-MM-DDTHH:MM:SSZ" (or with a trailing offset-free time).
Timestamp parse_iso8601(const std::string& text);

} // namespace pairing
