#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace flsarb {

using Date = std::chrono::year_month_day;

// Strict ISO-8601 calendar date, YYYY-MM-DD. Returns nullopt on anything else.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(const Date& d);

// Consecutive business days (Mon-Fri) starting at `start` (rolled forward if
// it falls on a weekend). Used to stamp synthetic series.
Date add_business_days(Date start, long count);

}  // namespace flsarb
