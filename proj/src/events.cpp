#include "evstudy/events.hpp"

#include <algorithm>
#include <set>

#include "evstudy/error.hpp"

namespace evstudy {

std::optional<double> Event::number(const std::string& key) const {
    auto it = attributes.find(key);
    if (it == attributes.end()) return std::nullopt;
    if (const double* v = std::get_if<double>(&it->second)) return *v;
    return std::nullopt;
}

std::optional<std::string> Event::text(const std::string& key) const {
    auto it = attributes.find(key);
    if (it == attributes.end()) return std::nullopt;
    if (const auto* v = std::get_if<std::string>(&it->second)) return *v;
    return std::nullopt;
}

EventSet::EventSet(std::vector<Event> events) : events_(std::move(events)) {
    std::stable_sort(events_.begin(), events_.end(),
                     [](const Event& a, const Event& b) { return a.date < b.date; });
    std::set<std::pair<Date, std::string>> seen;
    for (const auto& e : events_) {
        if (!seen.emplace(e.date, e.name).second)
            throw DomainError("duplicate event '" + e.name + "' on " + format_date(e.date));
    }
}

std::vector<Date> EventSet::dates() const {
    std::vector<Date> out;
    out.reserve(events_.size());
    for (const auto& e : events_) out.push_back(e.date);
    return out;
}

EventSet EventSet::filter_years(int first_year, int last_year) const {
    std::vector<Event> kept;
    for (const auto& e : events_) {
        const int y = year_of(e.date);
        if (y >= first_year && y <= last_year) kept.push_back(e);
    }
    return EventSet(std::move(kept));
}

EventSet EventSet::filter_openness(Openness openness) const {
    std::vector<Event> kept;
    for (const auto& e : events_)
        if (e.openness == openness) kept.push_back(e);
    return EventSet(std::move(kept));
}

GroupAssignment split_by_openness(const EventSet& events) {
    GroupAssignment g;
    g.group_a = events.filter_openness(Openness::Open);
    g.group_b = events.filter_openness(Openness::Closed);
    g.label_a = "open";
    g.label_b = "closed";
    return g;
}

GroupAssignment split_by_median(const EventSet& events, const std::string& attribute) {
    std::vector<double> values;
    for (const auto& e : events)
        if (auto v = e.number(attribute)) values.push_back(*v);
    if (values.empty()) throw DomainError("attribute '" + attribute + "' missing on every event");
    if (values.size() < 2)
        throw DomainError("attribute '" + attribute + "' present on fewer than 2 events");

    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const double median =
        n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);

    std::vector<Event> above, rest;
    for (const auto& e : events) {
        auto v = e.number(attribute);
        if (!v) continue;
        (*v > median ? above : rest).push_back(e);
    }
    GroupAssignment g{EventSet(std::move(above)), EventSet(std::move(rest)),
                      attribute + ">median", attribute + "<=median"};
    return g;
}

GroupAssignment split_by_value(const EventSet& events, const std::string& attribute,
                               const std::string& pivot) {
    std::vector<Event> match, rest;
    for (const auto& e : events) {
        auto v = e.text(attribute);
        if (!v) continue;
        (*v == pivot ? match : rest).push_back(e);
    }
    if (match.empty() && rest.empty())
        throw DomainError("attribute '" + attribute + "' missing on every event");
    return {EventSet(std::move(match)), EventSet(std::move(rest)), attribute + "=" + pivot,
            attribute + "!=" + pivot};
}

GroupAssignment split_by_sign(const EventSet& events, const std::string& attribute) {
    std::vector<Event> negative, rest;
    for (const auto& e : events) {
        auto v = e.number(attribute);
        if (!v) continue;
        (*v < 0.0 ? negative : rest).push_back(e);
    }
    if (negative.empty() && rest.empty())
        throw DomainError("attribute '" + attribute + "' missing on every event");
    return {EventSet(std::move(negative)), EventSet(std::move(rest)), attribute + "<0",
            attribute + ">=0"};
}

std::vector<FrontierPoint> frontier_path(const EventSet& events, Openness openness,
                                         const std::string& attribute) {
    std::vector<FrontierPoint> out;
    for (const auto& e : events) {
        if (e.openness != openness) continue;
        auto score = e.number(attribute);
        if (!score) continue;
        if (!out.empty() && out.back().date == e.date) {
            out.back().best_score = std::max(out.back().best_score, *score);
        } else {
            const double prev = out.empty() ? *score : out.back().best_score;
            out.push_back({e.date, std::max(prev, *score)});
        }
    }
    if (out.empty())
        throw DomainError(std::string("no scored ") +
                          (openness == Openness::Open ? "open" : "closed") + " events");
    return out;
}

double agi_forecast_shift(const PriceSeries& forecast, const Event& event, int w) {
    if (w <= 0) throw DomainError("forecast shift window must be positive");
    const auto& cal = forecast.calendar();
    const auto pos = cal.position_on_or_before(event.date);
    if (!pos)
        throw DomainError("event '" + event.name + "' precedes the forecast series");
    const long before = static_cast<long>(*pos) - w;
    const long after = static_cast<long>(*pos) + w;
    if (before < 0 || after >= static_cast<long>(cal.size()))
        throw DomainError("forecast series does not cover +/-" + std::to_string(w) +
                          " business days around '" + event.name + "'");
    return forecast.transformed(static_cast<std::size_t>(after)) -
           forecast.transformed(static_cast<std::size_t>(before));
}

}  // namespace evstudy
