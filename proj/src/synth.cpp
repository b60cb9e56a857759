#include "evstudy/synth.hpp"

#include <cmath>

#include "evstudy/error.hpp"
#include "evstudy/rng.hpp"

namespace evstudy {

EffectProfile& EffectProfile::add(int group, int s, double value) {
    effects[{group, s}] += value;
    return *this;
}

double EffectProfile::at(int group, int s) const {
    const auto it = effects.find({group, s});
    return it == effects.end() ? 0.0 : it->second;
}

EffectProfile EffectProfile::step(int group, int s, double delta) {
    EffectProfile p;
    p.add(group, s, delta);
    return p;
}

TradingCalendar weekday_calendar(Date start, std::size_t n) {
    using namespace std::chrono;
    std::vector<Date> dates;
    dates.reserve(n);
    for (Date d = start; dates.size() < n; d += days{1}) {
        const weekday wd{d};
        if (wd != Saturday && wd != Sunday) dates.push_back(d);
    }
    return TradingCalendar(std::move(dates));
}

PriceSeries generate_walk(const SynthSpec& spec) {
    if (!(spec.sigma >= 0.0)) throw DomainError("sigma must be non-negative");
    if (spec.window < 1) throw DomainError("window must be at least 1");
    if (spec.length < static_cast<std::size_t>(2 * spec.window + 2))
        throw DomainError("series length must be at least 2W + 2");
    SplitMix64 rng(spec.seed);
    std::vector<double> values(spec.length);
    values[0] = spec.start_level;
    for (std::size_t t = 1; t < spec.length; ++t) {
        const double z = rng.normal();
        values[t] = values[t - 1] + spec.drift + spec.sigma * z;
    }
    return PriceSeries(spec.asset_id, weekday_calendar(spec.start, spec.length),
                       std::move(values), Transform::Level);
}

PriceSeries inject_effects(const PriceSeries& series, const GroupAssignment& groups,
                           const EffectProfile& profile, int window) {
    if (window < 1) throw DomainError("window must be at least 1");
    const std::size_t n = series.size();
    const auto w = static_cast<std::size_t>(window);
    std::vector<double> bumps(n, 0.0);  // added to the return ending at position t

    auto inject = [&](const EventSet& events, int group) {
        for (const auto& e : events) {
            const std::size_t p = align_event_position(series.calendar(), e.date);
            if (p < w + 1 || p + w >= n)
                throw DomainError("event window truncated: '" + e.name + "' lacks " +
                                  std::to_string(window) + " business days on one side");
            for (int s = -window; s <= window; ++s)
                bumps[static_cast<std::size_t>(static_cast<long>(p) + s)] += profile.at(group, s);
        }
    };
    inject(groups.group_a, 0);
    inject(groups.group_b, 1);

    std::vector<double> values(series.values().begin(), series.values().end());
    double shift = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        shift += bumps[t];
        if (series.transform() == Transform::Log)
            values[t] *= std::exp(shift);
        else
            values[t] += shift;
    }
    return PriceSeries(series.asset_id(), series.calendar(), std::move(values),
                       series.transform());
}

EventSet events_at(const TradingCalendar& calendar, const std::vector<std::size_t>& positions,
                   const std::string& prefix, Openness openness) {
    std::vector<Event> events;
    events.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (positions[i] >= calendar.size()) throw DomainError("event position beyond calendar");
        Event e;
        e.date = calendar[positions[i]];
        e.name = prefix + std::to_string(i);
        e.openness = openness;
        events.push_back(std::move(e));
    }
    return EventSet(std::move(events));
}

std::vector<std::size_t> spaced_positions(std::size_t length, std::size_t count, int window,
                                          std::size_t offset) {
    const auto w = static_cast<std::size_t>(window);
    if (count == 0) return {};
    const std::size_t first = w + 1 + offset;
    if (length < first + w + 1) throw DomainError("series too short for the event layout");
    const std::size_t last = length - 1 - w;
    const std::size_t span = last - first;
    std::vector<std::size_t> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(first + (count == 1 ? 0 : span * i / (count - 1)));
    return out;
}

EventLayout overlapping_layout(std::size_t length, std::size_t per_group, int window) {
    const auto w = static_cast<std::size_t>(window);
    if (length < w + 1) throw DomainError("series too short for the event layout");
    EventLayout out;
    out.a = spaced_positions(length - w, per_group, window);
    for (std::size_t i = 0; i < out.a.size(); ++i) out.b.push_back(out.a[i] + 1 + (3 * i) % w);
    return out;
}

}  // namespace evstudy
