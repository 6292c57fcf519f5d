#include <doctest.h>

#include <limits>

#include "molehill/dates.hpp"
#include "molehill/errors.hpp"

using namespace molehill;

TEST_SUITE("dates") {

TEST_CASE("long format spells out the month") {
    CHECK(CivilDate{2014, 7, 8}.long_format() == "July 8, 2014");
    CHECK(CivilDate{2020, 1, 1}.long_format() == "January 1, 2020");
    CHECK(CivilDate{1999, 12, 31}.long_format() == "December 31, 1999");
    CHECK_THROWS_AS((CivilDate{2021, 2, 29}.long_format()), DataError);
}

TEST_CASE("calendar validity handles leap years") {
    CHECK(CivilDate{2020, 2, 29}.is_valid());
    CHECK_FALSE(CivilDate{2021, 2, 29}.is_valid());
    CHECK(CivilDate{2000, 2, 29}.is_valid());    // divisible by 400
    CHECK_FALSE(CivilDate{1900, 2, 29}.is_valid());  // century, not by 400
    CHECK_FALSE(CivilDate{2020, 13, 1}.is_valid());
    CHECK_FALSE(CivilDate{2020, 4, 31}.is_valid());
}

TEST_CASE("civil day arithmetic round-trips across decades") {
    CHECK(days_from_civil(CivilDate{1970, 1, 1}) == 0);
    CHECK(days_from_civil(CivilDate{1970, 1, 2}) == 1);
    CHECK(days_from_civil(CivilDate{1969, 12, 31}) == -1);
    for (std::int64_t d = -40000; d <= 40000; d += 17) {
        CHECK(days_from_civil(civil_from_days(d)) == d);
    }
}

TEST_CASE("iso date parsing") {
    const CivilDate d = parse_civil_date("2014-07-08");
    CHECK(d == CivilDate{2014, 7, 8});
    CHECK_THROWS_AS(parse_civil_date("2014/07/08"), DataError);
    CHECK_THROWS_AS(parse_civil_date("2014-7-8"), DataError);
    CHECK_THROWS_AS(parse_civil_date("2021-02-29"), DataError);
}

TEST_CASE("rfc3339 parsing accepts z and numeric offsets") {
    CHECK(parse_rfc3339("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_rfc3339("1970-01-01T00:01:00Z") == 60);
    CHECK(parse_rfc3339("2023-05-01T12:00:00Z") ==
          days_from_civil(CivilDate{2023, 5, 1}) * 86400 + 12 * 3600);
    // +02:00 means two hours earlier in UTC.
    CHECK(parse_rfc3339("1970-01-01T02:00:00+02:00") == 0);
    CHECK(parse_rfc3339("1969-12-31T22:00:00-02:00") == 0);
    CHECK(parse_rfc3339("2023-05-01T12:00:00.25Z") ==
          parse_rfc3339("2023-05-01T12:00:00Z"));  // fraction ignored
    CHECK_THROWS_AS(parse_rfc3339("2023-05-01 12:00:00"), DataError);  // no offset
    CHECK_THROWS_AS(parse_rfc3339("2023-05-01T12:00:00+0200"), DataError);
    CHECK_THROWS_AS(parse_rfc3339("2023-05-01T25:00:00Z"), DataError);
}

TEST_CASE("rfc3339 formatting is canonical and inverse to parsing") {
    CHECK(format_rfc3339(0) == "1970-01-01T00:00:00Z");
    CHECK(format_rfc3339(-1) == "1969-12-31T23:59:59Z");
    for (std::int64_t t : {0LL, 1234567890LL, -86400LL, 4102444799LL}) {
        CHECK(parse_rfc3339(format_rfc3339(t)) == t);
    }
}

TEST_CASE("decimal years land proportionally inside the year") {
    CHECK(date_from_decimal_year(1960.0) == CivilDate{1960, 1, 1});
    CHECK(date_from_decimal_year(2030.0) == CivilDate{2030, 1, 1});
    // Half of a 365-day year is day 182 (zero-based): July 2.
    CHECK(date_from_decimal_year(1961.5) == CivilDate{1961, 7, 2});
    // The fraction never spills into the next year.
    CHECK(date_from_decimal_year(1961.9999999) == CivilDate{1961, 12, 31});
    CHECK_THROWS_AS(date_from_decimal_year(std::numeric_limits<double>::quiet_NaN()), DataError);
}

}  // TEST_SUITE
