#pragma once

#include <string>
#include <string_view>

#include "evstudy/calendar.hpp"
#include "evstudy/events.hpp"

namespace evstudy {

// Readers for the published CSV shapes. All of them reject malformed rows
// with a ParseError carrying the 1-based data row; none of them repair input.

/// FRED download: `DATE,<SERIES_ID>` header, ISO dates, "." for a missing
/// value. Rows with "." are dropped. The asset id is the value column's name
/// unless `asset_id` is given. Result is a Level series.
PriceSeries parse_fred_csv(std::string_view text, std::string asset_id = {});

/// Yahoo-style OHLC file; consumes `Date` and `Adj Close`. Result is a Log
/// series.
PriceSeries parse_ohlc_csv(std::string_view text, std::string asset_id = "equity");

/// Event table `date,model,open[,lab,country,arena_score,frontier_gap,agi_shift]`.
/// `open` is "x" for an open-weight release and empty otherwise. Dates may be
/// ISO or MM/DD/YYYY. Extra columns are kept as text attributes.
EventSet parse_event_table(std::string_view text);

/// Median-forecast series: a date column then a forecast column. The forecast
/// is the predicted arrival date, given either as an ISO/MM/DD/YYYY date or as
/// a number of days since 1970-01-01; it is stored as days since 1970-01-01.
/// "." rows are dropped.
PriceSeries parse_forecast_series(std::string_view text, std::string asset_id = "agi_forecast");

/// Canonical event table: all eight standard columns, ISO dates, shortest
/// round-trip numbers; extra text attributes follow in name order.
std::string render_event_table(const EventSet& events);

/// FRED shape for Level series.
std::string render_fred_csv(const PriceSeries& series);

/// OHLC shape with every price column equal to the stored value.
std::string render_ohlc_csv(const PriceSeries& series);

}  // namespace evstudy
