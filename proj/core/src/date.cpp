#include "flsarb/date.hpp"

#include <charconv>
#include <cstdio>

namespace flsarb {
namespace {

bool parse_int(std::string_view s, int& out) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0, m = 0, d = 0;
    if (!parse_int(text.substr(0, 4), y) || !parse_int(text.substr(5, 2), m) ||
        !parse_int(text.substr(8, 2), d)) {
        return std::nullopt;
    }
    const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (!date.ok()) return std::nullopt;
    return date;
}

std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

Date add_business_days(Date start, long count) {
    using namespace std::chrono;
    sys_days day{start};
    auto is_weekend = [](sys_days sd) {
        const weekday wd{sd};
        return wd == Saturday || wd == Sunday;
    };
    while (is_weekend(day)) day += days{1};
    for (long i = 0; i < count; ++i) {
        do {
            day += days{1};
        } while (is_weekend(day));
    }
    return Date{day};
}

}  // namespace flsarb
