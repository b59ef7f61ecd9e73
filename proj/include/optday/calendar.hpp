#pragma once

#include <array>
#include <chrono>
#include <string>
#include <string_view>
#include <vector>

namespace optday {

using Date = std::chrono::year_month_day;

inline constexpr int kDaysPerYear = 365;

bool is_leap_year(int year);

// Ordinal day 1..365. Throws LeapYearError for dates in a leap year.
int day_of_year(const Date& date);

// Inverse of day_of_year.
Date date_from_day_of_year(int year, int day);

Date make_date(int year, unsigned month, unsigned day);

// Strict YYYY-MM-DD. Throws InvalidArgument on malformed or impossible dates.
Date parse_iso_date(std::string_view text);
std::string format_iso_date(const Date& date);

// Every statutory federal holiday of `year` (1971..2099), both the actual
// date and, for fixed-date holidays falling on a weekend, the observed date
// (Saturday -> Friday, Sunday -> Monday). Observed dates that spill into the
// neighbouring year are attributed to the year they fall in. Sorted, unique.
std::vector<Date> us_federal_holidays(int year);

// Mon-Thu, non-holiday days of a non-leap year.
class ValidDayCalendar {
public:
    ValidDayCalendar(int year, const std::array<bool, kDaysPerYear>& valid);

    int year() const { return year_; }
    bool is_valid(int day) const;
    int valid_count() const;
    std::vector<int> valid_days() const;

private:
    int year_;
    std::array<bool, kDaysPerYear> valid_;
};

ValidDayCalendar build_valid_day_calendar(int year);

}  // namespace optday
