#include "evstudy/calendar.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "evstudy/error.hpp"

namespace evstudy {

namespace {

bool parse_uint(std::string_view text, unsigned& out) {
    if (text.empty()) return false;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

std::optional<Date> make_date(unsigned y, unsigned m, unsigned d) {
    using namespace std::chrono;
    const year_month_day ymd{year{static_cast<int>(y)}, month{m}, day{d}};
    if (!ymd.ok()) return std::nullopt;
    return sys_days{ymd};
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
    unsigned y = 0, m = 0, d = 0;
    if (text.size() == 10 && text[4] == '-' && text[7] == '-') {
        if (parse_uint(text.substr(0, 4), y) && parse_uint(text.substr(5, 2), m) &&
            parse_uint(text.substr(8, 2), d))
            return make_date(y, m, d);
        return std::nullopt;
    }
    if (text.size() == 10 && text[2] == '/' && text[5] == '/') {
        if (parse_uint(text.substr(0, 2), m) && parse_uint(text.substr(3, 2), d) &&
            parse_uint(text.substr(6, 4), y))
            return make_date(y, m, d);
    }
    return std::nullopt;
}

std::string format_date(Date d) {
    const std::chrono::year_month_day ymd{d};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

int year_of(Date d) { return static_cast<int>(std::chrono::year_month_day{d}.year()); }

TradingCalendar::TradingCalendar(std::vector<Date> dates) : dates_(std::move(dates)) {
    for (std::size_t i = 1; i < dates_.size(); ++i) {
        if (dates_[i] <= dates_[i - 1])
            throw DomainError("calendar dates must be strictly increasing (at " +
                              format_date(dates_[i]) + ")");
    }
}

std::optional<std::size_t> TradingCalendar::find(Date d) const {
    auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.end() || *it != d) return std::nullopt;
    return static_cast<std::size_t>(it - dates_.begin());
}

std::optional<std::size_t> TradingCalendar::position_on_or_before(Date d) const {
    auto it = std::upper_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.begin()) return std::nullopt;
    return static_cast<std::size_t>(it - dates_.begin()) - 1;
}

TradingCalendar TradingCalendar::drop_first() const {
    if (dates_.empty()) return {};
    return TradingCalendar(std::vector<Date>(dates_.begin() + 1, dates_.end()));
}

PriceSeries::PriceSeries(std::string asset_id, TradingCalendar calendar, std::vector<double> values,
                         Transform transform)
    : asset_id_(std::move(asset_id)),
      calendar_(std::move(calendar)),
      values_(std::move(values)),
      transform_(transform) {
    if (values_.size() != calendar_.size())
        throw DomainError("series '" + asset_id_ + "': " + std::to_string(values_.size()) +
                          " values for " + std::to_string(calendar_.size()) + " dates");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw DomainError("series '" + asset_id_ + "': non-finite value on " +
                              format_date(calendar_[i]));
        if (transform_ == Transform::Log && values_[i] <= 0.0)
            throw DomainError("series '" + asset_id_ + "': non-positive value on " +
                              format_date(calendar_[i]) + " under log transform");
    }
}

double PriceSeries::transformed(std::size_t i) const {
    return transform_ == Transform::Log ? std::log(values_[i]) : values_[i];
}

std::vector<double> PriceSeries::transformed_values() const {
    std::vector<double> out(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) out[i] = transformed(i);
    return out;
}

ReturnSeries to_returns(const PriceSeries& series) {
    if (series.size() < 2)
        throw DomainError("series '" + series.asset_id() + "' needs at least 2 observations");
    const auto f = series.transformed_values();
    ReturnSeries out;
    out.asset_id = series.asset_id();
    out.calendar = series.calendar().drop_first();
    out.transform = series.transform();
    out.returns.resize(f.size() - 1);
    for (std::size_t t = 1; t < f.size(); ++t) out.returns[t - 1] = f[t] - f[t - 1];
    return out;
}

std::size_t align_event_position(const TradingCalendar& calendar, Date d) {
    auto pos = calendar.position_on_or_before(d);
    if (!pos)
        throw DomainError("event date " + format_date(d) + " precedes the first calendar date");
    return *pos;
}

Date align_event_date(const TradingCalendar& calendar, Date d) {
    return calendar[align_event_position(calendar, d)];
}

Date relative_day_index(const TradingCalendar& calendar, Date anchor, int s) {
    auto pos = calendar.find(anchor);
    if (!pos) throw DomainError("anchor " + format_date(anchor) + " is not a calendar date");
    const long target = static_cast<long>(*pos) + s;
    if (target < 0 || target >= static_cast<long>(calendar.size()))
        throw DomainError("relative day " + std::to_string(s) + " from " + format_date(anchor) +
                          " leaves the calendar");
    return calendar[static_cast<std::size_t>(target)];
}

}  // namespace evstudy
