#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "evstudy/calendar.hpp"
#include "evstudy/events.hpp"

namespace evstudy {

/// Random-walk generator settings. Volatility and drift are in the series'
/// own units per day (percent for yields).
struct SynthSpec {
    std::size_t length = 750;
    double sigma = 0.05;
    double drift = 0.0;
    double start_level = 4.0;
    std::uint64_t seed = 0;
    Date start = std::chrono::sys_days{std::chrono::year{2022} / 9 / 1};
    std::string asset_id = "SYNTH";
    /// Smallest event window the series must accommodate (length >= 2W + 2).
    int window = 15;
};

/// Injected return per (group, relative day).
struct EffectProfile {
    std::map<std::pair<int, int>, double> effects;

    EffectProfile& add(int group, int s, double value);
    double at(int group, int s) const;

    /// `delta` on day `s` for `group`, nothing else.
    static EffectProfile step(int group, int s, double delta);
};

/// `n` consecutive Monday-Friday dates from the first weekday on or after `start`.
TradingCalendar weekday_calendar(Date start, std::size_t n);

/// y_t = y_{t-1} + drift + sigma z_t, z_t standard normal from
/// SplitMix64(seed). Level series on a weekday calendar. Throws DomainError
/// for sigma < 0 or length < 2W + 2.
PriceSeries generate_walk(const SynthSpec& spec);

/// Adds profile(g, s) to the day t_i + s return of every event i of group g
/// (0 = A, 1 = B), i.e. shifts every later level by that amount (for Log
/// series, multiplies by exp of it). Overlapping injections add. Throws
/// DomainError when an event's +/-`window` return window leaves the series.
PriceSeries inject_effects(const PriceSeries& series, const GroupAssignment& groups,
                           const EffectProfile& profile, int window);

/// Events at the given calendar positions, named "<prefix><i>".
EventSet events_at(const TradingCalendar& calendar, const std::vector<std::size_t>& positions,
                   const std::string& prefix, Openness openness = Openness::Closed);

/// `count` evenly spaced price positions whose +/-window return windows fit a
/// series of `length` observations, starting `offset` days in. Used to lay
/// out deterministic synthetic releases.
std::vector<std::size_t> spaced_positions(std::size_t length, std::size_t count, int window,
                                          std::size_t offset = 0);

struct EventLayout {
    std::vector<std::size_t> a;
    std::vector<std::size_t> b;
};

/// Price positions for two groups of `per_group` releases each. A releases
/// are evenly spaced; each B release trails an A release by a lag cycling
/// through 1..W, so windows overlap but no B dummy repeats an A dummy.
EventLayout overlapping_layout(std::size_t length, std::size_t per_group, int window);

}  // namespace evstudy
