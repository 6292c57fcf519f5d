#include "molehill/dates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "molehill/errors.hpp"

namespace molehill {

namespace {

constexpr const char* kMonthNames[12] = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int table[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return table[m - 1];
}

int parse_digits(const std::string& s, std::size_t pos, std::size_t count) {
    int v = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        if (i >= s.size() || s[i] < '0' || s[i] > '9')
            throw DataError("malformed date/time: " + s);
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

}  // namespace

bool CivilDate::is_valid() const {
    return month >= 1 && month <= 12 && day >= 1 && day <= days_in_month(year, month);
}

std::string CivilDate::long_format() const {
    if (!is_valid()) throw DataError("invalid calendar date");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%s %d, %d", kMonthNames[month - 1], day, year);
    return buf;
}

// Howard Hinnant's days-from-civil algorithm.
std::int64_t days_from_civil(const CivilDate& d) {
    if (!d.is_valid()) throw DataError("invalid calendar date");
    const int y = d.year - (d.month <= 2 ? 1 : 0);
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy =
        (153u * static_cast<unsigned>(d.month + (d.month > 2 ? -3 : 9)) + 2u) / 5u +
        static_cast<unsigned>(d.day) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t days) {
    const std::int64_t z = days + 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDate{static_cast<int>(y + (m <= 2 ? 1 : 0)), static_cast<int>(m),
                     static_cast<int>(d)};
}

CivilDate parse_civil_date(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw DataError("malformed date (want YYYY-MM-DD): " + text);
    CivilDate d{parse_digits(text, 0, 4), parse_digits(text, 5, 2), parse_digits(text, 8, 2)};
    if (!d.is_valid()) throw DataError("invalid calendar date: " + text);
    return d;
}

std::int64_t parse_rfc3339(const std::string& text) {
    if (text.size() < 20 || (text[10] != 'T' && text[10] != 't' && text[10] != ' '))
        throw DataError("malformed RFC-3339 timestamp: " + text);
    const CivilDate date = parse_civil_date(text.substr(0, 10));
    if (text[13] != ':' || text[16] != ':')
        throw DataError("malformed RFC-3339 timestamp: " + text);
    const int hh = parse_digits(text, 11, 2);
    const int mm = parse_digits(text, 14, 2);
    const int ss = parse_digits(text, 17, 2);
    if (hh > 23 || mm > 59 || ss > 60)
        throw DataError("invalid time of day: " + text);

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
        if (pos == start) throw DataError("malformed fractional seconds: " + text);
    }
    if (pos >= text.size()) throw DataError("missing UTC offset: " + text);

    std::int64_t offset = 0;
    const char c = text[pos];
    if (c == 'Z' || c == 'z') {
        if (pos + 1 != text.size()) throw DataError("trailing characters: " + text);
    } else if (c == '+' || c == '-') {
        if (pos + 6 != text.size() || text[pos + 3] != ':')
            throw DataError("malformed UTC offset: " + text);
        const int oh = parse_digits(text, pos + 1, 2);
        const int om = parse_digits(text, pos + 4, 2);
        offset = (c == '+' ? 1 : -1) * (oh * 3600LL + om * 60LL);
    } else {
        throw DataError("malformed UTC offset: " + text);
    }
    const std::int64_t secs =
        days_from_civil(date) * 86400LL + hh * 3600LL + mm * 60LL + std::min(ss, 59);
    return secs - offset;
}

std::string format_rfc3339(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    const CivilDate d = civil_from_days(days);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", d.year, d.month, d.day,
                  static_cast<int>(rem / 3600), static_cast<int>(rem % 3600 / 60),
                  static_cast<int>(rem % 60));
    return buf;
}

CivilDate date_from_decimal_year(double year) {
    if (!std::isfinite(year)) throw DataError("non-finite year");
    const int y = static_cast<int>(std::floor(year));
    const double frac = year - std::floor(year);
    const int year_days = is_leap(y) ? 366 : 365;
    int doy = static_cast<int>(std::floor(frac * year_days));
    doy = std::min(doy, year_days - 1);
    return civil_from_days(days_from_civil(CivilDate{y, 1, 1}) + doy);
}

}  // namespace molehill
