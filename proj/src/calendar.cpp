#include "optday/calendar.hpp"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

#include "optday/error.hpp"

namespace optday {

namespace chr = std::chrono;

namespace {

Date nth_weekday(int year, unsigned month, chr::weekday wd, unsigned n) {
    return Date{chr::sys_days{chr::year{year} / chr::month{month} / wd[n]}};
}

Date last_weekday(int year, unsigned month, chr::weekday wd) {
    return Date{chr::sys_days{chr::year{year} / chr::month{month} / wd[chr::last]}};
}

Date shift_days(const Date& d, int days) {
    return Date{chr::sys_days{d} + chr::days{days}};
}

// Saturday -> preceding Friday, Sunday -> following Monday.
Date observed_date(const Date& d) {
    const chr::weekday wd{chr::sys_days{d}};
    if (wd == chr::Saturday) return shift_days(d, -1);
    if (wd == chr::Sunday) return shift_days(d, 1);
    return d;
}

}  // namespace

bool is_leap_year(int year) { return chr::year{year}.is_leap(); }

Date make_date(int year, unsigned month, unsigned day) {
    const Date d{chr::year{year}, chr::month{month}, chr::day{day}};
    if (!d.ok()) {
        throw InvalidArgument(fmt::format("invalid date {}-{:02}-{:02}", year, month, day));
    }
    return d;
}

int day_of_year(const Date& date) {
    const int year = static_cast<int>(date.year());
    if (is_leap_year(year)) throw LeapYearError(year);
    const chr::sys_days jan1{chr::year{year} / chr::January / 1};
    return static_cast<int>((chr::sys_days{date} - jan1).count()) + 1;
}

Date date_from_day_of_year(int year, int day) {
    if (is_leap_year(year)) throw LeapYearError(year);
    if (day < 1 || day > kDaysPerYear) {
        throw InvalidArgument(fmt::format("day of year {} out of range 1..365", day));
    }
    const chr::sys_days jan1{chr::year{year} / chr::January / 1};
    return Date{jan1 + chr::days{day - 1}};
}

Date parse_iso_date(std::string_view text) {
    auto fail = [&]() -> Date {
        throw InvalidArgument(fmt::format("invalid ISO date '{}'", text));
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return fail();
    int y = 0;
    unsigned m = 0, d = 0;
    auto parse = [&](std::string_view part, auto& out) {
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
        return ec == std::errc{} && ptr == part.data() + part.size();
    };
    if (!parse(text.substr(0, 4), y) || !parse(text.substr(5, 2), m) ||
        !parse(text.substr(8, 2), d)) {
        return fail();
    }
    const Date date{chr::year{y}, chr::month{m}, chr::day{d}};
    if (!date.ok()) return fail();
    return date;
}

std::string format_iso_date(const Date& date) {
    return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(date.year()),
                       static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
}

std::vector<Date> us_federal_holidays(int year) {
    if (year < 1971 || year > 2099) {
        throw InvalidArgument(fmt::format("holiday rules cover 1971..2099, got {}", year));
    }
    std::vector<Date> out;
    auto fixed = [&](int y, unsigned month, unsigned day) {
        const Date actual = make_date(y, month, day);
        for (const Date& d : {actual, observed_date(actual)}) {
            if (static_cast<int>(d.year()) == year) out.push_back(d);
        }
    };

    fixed(year, 1, 1);
    // New Year's Day of the following year observed on Dec 31.
    fixed(year + 1, 1, 1);
    if (year >= 1986) out.push_back(nth_weekday(year, 1, chr::Monday, 3));  // MLK Day
    out.push_back(nth_weekday(year, 2, chr::Monday, 3));                    // Washington's Birthday
    out.push_back(last_weekday(year, 5, chr::Monday));                      // Memorial Day
    if (year >= 2021) fixed(year, 6, 19);                                   // Juneteenth
    fixed(year, 7, 4);
    out.push_back(nth_weekday(year, 9, chr::Monday, 1));   // Labor Day
    out.push_back(nth_weekday(year, 10, chr::Monday, 2));  // Columbus Day
    if (year >= 1971 && year <= 1977) {
        out.push_back(nth_weekday(year, 10, chr::Monday, 4));  // Veterans Day, Monday-holiday era
    } else {
        fixed(year, 11, 11);
    }
    out.push_back(nth_weekday(year, 11, chr::Thursday, 4));  // Thanksgiving
    fixed(year, 12, 25);

    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ValidDayCalendar::ValidDayCalendar(int year, const std::array<bool, kDaysPerYear>& valid)
    : year_(year), valid_(valid) {
    if (is_leap_year(year)) throw LeapYearError(year);
}

bool ValidDayCalendar::is_valid(int day) const {
    if (day < 1 || day > kDaysPerYear) return false;
    return valid_[static_cast<std::size_t>(day - 1)];
}

int ValidDayCalendar::valid_count() const {
    return static_cast<int>(std::count(valid_.begin(), valid_.end(), true));
}

std::vector<int> ValidDayCalendar::valid_days() const {
    std::vector<int> days;
    for (int d = 1; d <= kDaysPerYear; ++d) {
        if (is_valid(d)) days.push_back(d);
    }
    return days;
}

ValidDayCalendar build_valid_day_calendar(int year) {
    if (is_leap_year(year)) throw LeapYearError(year);
    std::array<bool, kDaysPerYear> valid{};
    for (int d = 1; d <= kDaysPerYear; ++d) {
        const chr::weekday wd{chr::sys_days{date_from_day_of_year(year, d)}};
        valid[static_cast<std::size_t>(d - 1)] = wd == chr::Monday || wd == chr::Tuesday ||
                                                 wd == chr::Wednesday || wd == chr::Thursday;
    }
    for (const Date& h : us_federal_holidays(year)) {
        valid[static_cast<std::size_t>(day_of_year(h) - 1)] = false;
    }
    return ValidDayCalendar(year, valid);
}

}  // namespace optday
