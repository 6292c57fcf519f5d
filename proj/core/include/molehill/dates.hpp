#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace molehill {

/// A calendar date in the proleptic Gregorian calendar.
struct CivilDate {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    auto operator<=>(const CivilDate&) const = default;

    bool is_valid() const;

    /// English long form, e.g. "July 8, 2014".
    std::string long_format() const;
};

/// Days since 1970-01-01 (may be negative).
std::int64_t days_from_civil(const CivilDate& d);
CivilDate civil_from_days(std::int64_t days);

/// "YYYY-MM-DD" -> CivilDate. Throws DataError on malformed input.
CivilDate parse_civil_date(const std::string& text);

/// RFC-3339 timestamp -> UTC epoch seconds. Accepts 'Z' or +-hh:mm offsets and
/// ignores fractional seconds. Throws DataError on malformed input.
std::int64_t parse_rfc3339(const std::string& text);

/// Epoch seconds -> canonical "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(std::int64_t epoch_seconds);

/// Fractional year (e.g. 2014.5) -> the calendar date that fraction of the way
/// through the year.
CivilDate date_from_decimal_year(double year);

}  // namespace molehill
