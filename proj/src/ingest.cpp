#include "evstudy/ingest.hpp"

#include <set>

#include "evstudy/csv.hpp"
#include "evstudy/error.hpp"

namespace evstudy {

namespace {

Date require_date(std::string_view cell, std::size_t row) {
    auto d = parse_date(trim(cell));
    if (!d) throw ParseError("unparseable date '" + std::string(trim(cell)) + "'", row);
    return *d;
}

void require_increasing(const std::vector<Date>& dates, Date d, std::size_t row) {
    if (!dates.empty() && d <= dates.back()) {
        throw ParseError(d == dates.back() ? "duplicate date " + format_date(d)
                                           : "date " + format_date(d) + " out of order",
                         row);
    }
}

struct DatedColumn {
    std::vector<Date> dates;
    std::vector<std::string> cells;
    std::vector<std::size_t> rows;
};

// Two-column date/value body with "." rows dropped. Ordering is checked on
// every row, missing or not.
DatedColumn read_dated_column(const RawTable& table, std::size_t date_col, std::size_t value_col) {
    DatedColumn out;
    std::vector<Date> all_dates;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const Date d = require_date(row[date_col], r + 1);
        require_increasing(all_dates, d, r + 1);
        all_dates.push_back(d);
        const auto cell = trim(row[value_col]);
        if (cell == ".") continue;
        out.dates.push_back(d);
        out.cells.emplace_back(cell);
        out.rows.push_back(r + 1);
    }
    return out;
}

}  // namespace

PriceSeries parse_fred_csv(std::string_view text, std::string asset_id) {
    const RawTable table = read_csv(text);
    if (table.header.size() != 2)
        throw ParseError("FRED file must have exactly two columns (date, value)");
    if (asset_id.empty()) asset_id = std::string(trim(table.header[1]));

    auto body = read_dated_column(table, 0, 1);
    std::vector<double> values;
    values.reserve(body.cells.size());
    for (std::size_t i = 0; i < body.cells.size(); ++i) {
        auto v = parse_number(body.cells[i]);
        if (!v) throw ParseError("non-numeric value '" + body.cells[i] + "'", body.rows[i]);
        values.push_back(*v);
    }
    if (values.empty()) throw ParseError("FRED file '" + asset_id + "' has no observations");
    return PriceSeries(std::move(asset_id), TradingCalendar(std::move(body.dates)),
                       std::move(values), Transform::Level);
}

PriceSeries parse_ohlc_csv(std::string_view text, std::string asset_id) {
    const RawTable table = read_csv(text);
    const auto date_col = table.column("Date");
    if (!date_col) throw ParseError("OHLC file has no 'Date' column");
    const auto close_col = table.column("Adj Close");
    if (!close_col) throw ParseError("OHLC file has no 'Adj Close' column");

    std::vector<Date> dates;
    std::vector<double> values;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const Date d = require_date(row[*date_col], r + 1);
        require_increasing(dates, d, r + 1);
        auto v = parse_number(row[*close_col]);
        if (!v) throw ParseError("non-numeric adjusted close '" + row[*close_col] + "'", r + 1);
        if (*v <= 0.0) throw ParseError("non-positive adjusted close", r + 1);
        dates.push_back(d);
        values.push_back(*v);
    }
    if (values.empty()) throw ParseError("OHLC file has no observations");
    return PriceSeries(std::move(asset_id), TradingCalendar(std::move(dates)), std::move(values),
                       Transform::Log);
}

namespace {

const std::vector<std::string> kNumericAttributes = {attr::arena_score, attr::frontier_gap,
                                                     attr::agi_shift};
const std::vector<std::string> kStandardColumns = {
    "date", "model", "open", attr::lab, attr::country, attr::arena_score, attr::frontier_gap,
    attr::agi_shift};

bool is_standard(std::string_view name) {
    for (const auto& c : kStandardColumns)
        if (c == name) return true;
    return false;
}

}  // namespace

EventSet parse_event_table(std::string_view text) {
    const RawTable table = read_csv(text);
    if (table.header.empty()) return {};
    const auto date_col = table.column("date");
    const auto model_col = table.column("model");
    const auto open_col = table.column("open");
    if (!date_col) throw ParseError("event table has no 'date' column");
    if (!model_col) throw ParseError("event table has no 'model' column");
    if (!open_col) throw ParseError("event table has no 'open' column");

    std::vector<Event> events;
    std::set<std::pair<Date, std::string>> seen;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        Event e;
        e.date = require_date(row[*date_col], r + 1);
        e.name = std::string(trim(row[*model_col]));
        if (e.name.empty()) throw ParseError("empty model name", r + 1);
        const auto flag = trim(row[*open_col]);
        if (flag == "x" || flag == "X")
            e.openness = Openness::Open;
        else if (flag.empty())
            e.openness = Openness::Closed;
        else
            throw ParseError("unknown openness token '" + std::string(flag) + "'", r + 1);

        for (std::size_t c = 0; c < table.header.size(); ++c) {
            const std::string name(trim(table.header[c]));
            const auto cell = trim(row[c]);
            if (cell.empty() || c == *date_col || c == *model_col || c == *open_col) continue;
            bool numeric = false;
            for (const auto& n : kNumericAttributes) numeric = numeric || n == name;
            if (numeric) {
                auto v = parse_number(cell);
                if (!v)
                    throw ParseError("non-numeric " + name + " '" + std::string(cell) + "'", r + 1);
                e.attributes[name] = *v;
            } else {
                e.attributes[name] = std::string(cell);
            }
        }
        if (!seen.emplace(e.date, e.name).second)
            throw ParseError("duplicate event '" + e.name + "' on " + format_date(e.date), r + 1);
        events.push_back(std::move(e));
    }
    return EventSet(std::move(events));
}

PriceSeries parse_forecast_series(std::string_view text, std::string asset_id) {
    const RawTable table = read_csv(text);
    if (table.header.size() != 2)
        throw ParseError("forecast file must have exactly two columns (date, forecast)");

    auto body = read_dated_column(table, 0, 1);
    std::vector<double> values;
    values.reserve(body.cells.size());
    for (std::size_t i = 0; i < body.cells.size(); ++i) {
        const auto& cell = body.cells[i];
        if (auto d = parse_date(cell)) {
            values.push_back(static_cast<double>(d->time_since_epoch().count()));
        } else if (auto v = parse_number(cell)) {
            values.push_back(*v);
        } else {
            throw ParseError("forecast value '" + cell + "' is neither a date nor a number",
                             body.rows[i]);
        }
    }
    if (values.empty()) throw ParseError("forecast file has no observations");
    return PriceSeries(std::move(asset_id), TradingCalendar(std::move(body.dates)),
                       std::move(values), Transform::Level);
}

std::string render_event_table(const EventSet& events) {
    std::set<std::string> extra;
    for (const auto& e : events)
        for (const auto& [k, v] : e.attributes)
            if (!is_standard(k)) extra.insert(k);

    std::vector<std::string> header = kStandardColumns;
    header.insert(header.end(), extra.begin(), extra.end());
    std::string out = csv_line(header);

    for (const auto& e : events) {
        std::vector<std::string> row{format_date(e.date), e.name,
                                     e.openness == Openness::Open ? "x" : ""};
        for (std::size_t c = 3; c < header.size(); ++c) {
            auto it = e.attributes.find(header[c]);
            if (it == e.attributes.end()) {
                row.emplace_back();
            } else if (const double* v = std::get_if<double>(&it->second)) {
                row.push_back(format_number(*v));
            } else {
                row.push_back(std::get<std::string>(it->second));
            }
        }
        out += csv_line(row);
    }
    return out;
}

std::string render_fred_csv(const PriceSeries& series) {
    std::string out = csv_line({"DATE", series.asset_id()});
    for (std::size_t i = 0; i < series.size(); ++i)
        out += csv_line({format_date(series.calendar()[i]), format_number(series.values()[i])});
    return out;
}

std::string render_ohlc_csv(const PriceSeries& series) {
    std::string out = "Date,Open,High,Low,Close,Adj Close,Volume\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto v = format_number(series.values()[i]);
        out += csv_line({format_date(series.calendar()[i]), v, v, v, v, v, "0"});
    }
    return out;
}

}  // namespace evstudy
