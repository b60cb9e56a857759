#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace evstudy {

using Date = std::chrono::sys_days;

/// Parses "YYYY-MM-DD" or "MM/DD/YYYY". Returns nullopt on anything else,
/// including impossible dates such as 2023-02-30.
std::optional<Date> parse_date(std::string_view text);

/// ISO-8601 "YYYY-MM-DD".
std::string format_date(Date d);

int year_of(Date d);

/// The dates on which one asset has an observation.
class TradingCalendar {
public:
    TradingCalendar() = default;

    /// Throws DomainError unless `dates` is strictly increasing.
    explicit TradingCalendar(std::vector<Date> dates);

    std::size_t size() const noexcept { return dates_.size(); }
    bool empty() const noexcept { return dates_.empty(); }
    Date operator[](std::size_t i) const { return dates_[i]; }
    Date front() const { return dates_.front(); }
    Date back() const { return dates_.back(); }
    std::span<const Date> dates() const noexcept { return dates_; }

    /// Position of `d`, if it is a calendar date.
    std::optional<std::size_t> find(Date d) const;

    /// Position of the last calendar date on or before `d`.
    std::optional<std::size_t> position_on_or_before(Date d) const;

    /// Calendar without its first date (the return calendar).
    TradingCalendar drop_first() const;

private:
    std::vector<Date> dates_;
};

enum class Transform { Level, Log };

/// One asset's observations: one finite value per calendar date. Yields are
/// carried in percent, equity prices in currency units.
class PriceSeries {
public:
    PriceSeries() = default;

    /// Throws DomainError on length mismatch, non-finite values, or
    /// non-positive values under Transform::Log.
    PriceSeries(std::string asset_id, TradingCalendar calendar, std::vector<double> values,
                Transform transform);

    const std::string& asset_id() const noexcept { return asset_id_; }
    const TradingCalendar& calendar() const noexcept { return calendar_; }
    std::span<const double> values() const noexcept { return values_; }
    Transform transform() const noexcept { return transform_; }
    std::size_t size() const noexcept { return values_.size(); }

    /// f(y_t): identity for Level, natural log for Log.
    double transformed(std::size_t i) const;
    std::vector<double> transformed_values() const;

private:
    std::string asset_id_;
    TradingCalendar calendar_;
    std::vector<double> values_;
    Transform transform_ = Transform::Level;
};

/// Daily returns f(y_t) - f(y_{t-1}) on the source calendar minus its first date.
struct ReturnSeries {
    std::string asset_id;
    TradingCalendar calendar;
    std::vector<double> returns;
    Transform transform = Transform::Level;
};

/// Throws DomainError for series shorter than two observations.
ReturnSeries to_returns(const PriceSeries& series);

/// Nearest calendar date on or before `d`. Throws DomainError when `d`
/// precedes the first calendar date.
Date align_event_date(const TradingCalendar& calendar, Date d);

/// Position form of align_event_date.
std::size_t align_event_position(const TradingCalendar& calendar, Date d);

/// The date `s` calendar positions after `anchor` (before, for s < 0).
/// Throws DomainError if `anchor` is not a calendar date or the offset
/// leaves the calendar.
Date relative_day_index(const TradingCalendar& calendar, Date anchor, int s);

/// Percent points to basis points.
constexpr double to_basis_points(double percent_points) noexcept { return percent_points * 100.0; }

}  // namespace evstudy
