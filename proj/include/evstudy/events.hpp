#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "evstudy/calendar.hpp"

namespace evstudy {

enum class Openness { Open, Closed };

using AttributeValue = std::variant<double, std::string>;

/// One dated model release.
struct Event {
    Date date{};
    std::string name;
    Openness openness = Openness::Closed;
    std::map<std::string, AttributeValue> attributes;

    std::optional<double> number(const std::string& key) const;
    std::optional<std::string> text(const std::string& key) const;

    friend bool operator==(const Event&, const Event&) = default;
};

/// Events sorted by date. Several models may share a date; the same
/// (date, name) pair may not appear twice.
class EventSet {
public:
    EventSet() = default;

    /// Sorts by date (stable, so same-date rows keep their input order) and
    /// throws DomainError on a duplicate (date, name).
    explicit EventSet(std::vector<Event> events);

    const std::vector<Event>& events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }
    const Event& operator[](std::size_t i) const { return events_[i]; }
    auto begin() const { return events_.begin(); }
    auto end() const { return events_.end(); }

    std::vector<Date> dates() const;

    /// Events dated in the inclusive year range.
    EventSet filter_years(int first_year, int last_year) const;
    EventSet filter_openness(Openness openness) const;

    friend bool operator==(const EventSet&, const EventSet&) = default;

private:
    std::vector<Event> events_;
};

/// Two disjoint groups of events, compared as A versus B.
struct GroupAssignment {
    EventSet group_a;
    EventSet group_b;
    std::string label_a = "A";
    std::string label_b = "B";
};

/// A = Open, B = Closed.
GroupAssignment split_by_openness(const EventSet& events);

/// A = strictly above the median of `attribute`, B = at or below it.
/// Events without a numeric value for `attribute` are left out. Throws
/// DomainError when fewer than two events carry the attribute.
GroupAssignment split_by_median(const EventSet& events, const std::string& attribute);

/// A = events whose text attribute equals `pivot`, B = the other events that
/// carry the attribute.
GroupAssignment split_by_value(const EventSet& events, const std::string& attribute,
                               const std::string& pivot);

/// A = negative `attribute` (e.g. AGI forecast moved sooner), B = zero or
/// positive. Events without the attribute are left out.
GroupAssignment split_by_sign(const EventSet& events, const std::string& attribute);

struct FrontierPoint {
    Date date{};
    double best_score = 0.0;
};

/// Running maximum of `arena_score` over releases of the given openness, one
/// point per distinct release date. Throws DomainError when no event of that
/// openness carries a score.
std::vector<FrontierPoint> frontier_path(const EventSet& events, Openness openness,
                                         const std::string& attribute = "arena_score");

/// Forecast value `w` business days after the aligned release date minus the
/// value `w` business days before it, on the forecast's own calendar.
double agi_forecast_shift(const PriceSeries& forecast, const Event& event, int w);

namespace attr {
inline constexpr const char* lab = "lab";
inline constexpr const char* country = "country";
inline constexpr const char* arena_score = "arena_score";
inline constexpr const char* frontier_gap = "frontier_gap";
inline constexpr const char* agi_shift = "agi_shift";
}  // namespace attr

}  // namespace evstudy
