#include "evstudy/permutation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "evstudy/error.hpp"

namespace evstudy {

namespace {

constexpr int kMaxRedraws = 100;

struct Sample {
    ReturnSeries returns;
    std::vector<double> levels;
    int window = 0;
};

Sample make_sample(const PriceSeries& series, int window) {
    if (window < 1) throw DomainError("window must be at least 1");
    return {to_returns(series), series.transformed_values(), window};
}

// Price positions -> return-calendar positions.
std::vector<std::size_t> to_return_positions(std::span<const std::size_t> price_positions) {
    std::vector<std::size_t> out(price_positions.begin(), price_positions.end());
    for (auto& p : out) --p;
    return out;
}

std::vector<double> group_statistic(Statistic stat, const Sample& s,
                                    std::span<const std::size_t> events) {
    switch (stat) {
        case Statistic::OlsPath:
        case Statistic::LadPath: {
            const auto design = build_design_at(s.returns, {to_return_positions(events)}, s.window);
            const auto fit = stat == Statistic::OlsPath ? fit_ols(design) : fit_lad(design);
            return accumulate_path(design, fit, 0).estimates();
        }
        case Statistic::MedianPath:
            return median_change_at(s.levels, events, s.window);
        default:
            throw DomainError("statistic is not a single-group statistic");
    }
}

std::vector<double> difference_statistic(Statistic stat, const Sample& s,
                                         std::span<const std::size_t> a,
                                         std::span<const std::size_t> b) {
    switch (stat) {
        case Statistic::OlsDifference:
        case Statistic::LadDifference: {
            // Fit with the groups in canonical order so that A - B and B - A
            // come from the same fit (LAD optima need not be unique).
            const bool swap = std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
            const auto design = build_design_at(
                s.returns,
                {to_return_positions(swap ? b : a), to_return_positions(swap ? a : b)}, s.window);
            const auto fit = stat == Statistic::OlsDifference ? fit_ols(design) : fit_lad(design);
            auto out = accumulate_difference(design, fit).estimates();
            if (swap)
                for (auto& v : out) v = -v;
            return out;
        }
        case Statistic::MedianDifference: {
            auto ma = median_change_at(s.levels, a, s.window);
            const auto mb = median_change_at(s.levels, b, s.window);
            for (std::size_t i = 0; i < ma.size(); ++i) ma[i] -= mb[i];
            return ma;
        }
        default:
            throw DomainError("statistic is not a group-comparison statistic");
    }
}

// Runs body(b) for b in [0, count) on a pool of threads. Each replication
// owns its output slot, so the reduction order is fixed by index.
template <class Body>
void for_each_replication(int count, unsigned threads, Body body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(count, 1)));
    std::atomic<int> next{0};
    std::mutex error_mutex;
    int error_index = count;
    std::exception_ptr error;

    auto worker = [&] {
        for (int b = next++; b < count; b = next++) {
            try {
                body(b);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (b < error_index) {
                    error_index = b;
                    error = std::current_exception();
                }
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

CumulativePath bare_path(std::string label, int window, const std::vector<double>& values) {
    CumulativePath path;
    path.label = std::move(label);
    path.window = window;
    path.has_inference = false;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (int r = -window; r <= window; ++r) {
        PathPoint pt;
        pt.day = r;
        pt.estimate = values[static_cast<std::size_t>(r + window)];
        pt.se = pt.p_value = pt.ci90_lo = pt.ci90_hi = pt.ci95_lo = pt.ci95_hi = nan;
        path.points.push_back(pt);
    }
    return path;
}

std::vector<std::size_t> event_positions(const PriceSeries& series, const EventSet& events,
                                         int window) {
    std::vector<std::size_t> out;
    out.reserve(events.size());
    const auto w = static_cast<std::size_t>(window);
    for (const auto& e : events) {
        const std::size_t p = align_event_position(series.calendar(), e.date);
        if (p < w + 1 || p + w >= series.size())
            throw DomainError("event '" + e.name + "' lacks +/-" + std::to_string(window) +
                              " business days of data");
        out.push_back(p);
    }
    return out;
}

PermutationResult summarize(CumulativePath observed,
                            const std::vector<std::vector<double>>& replicated, int window) {
    const std::size_t days = static_cast<std::size_t>(2 * window + 1);
    std::vector<std::vector<double>> per_day(days, std::vector<double>(replicated.size()));
    for (std::size_t b = 0; b < replicated.size(); ++b)
        for (std::size_t r = 0; r < days; ++r) per_day[r][b] = replicated[b][r];
    auto bands = percentile_bands(per_day);

    PermutationResult out;
    out.observed = std::move(observed);
    out.placebo_mean = std::move(bands.mean);
    out.band90 = std::move(bands.band90);
    out.band95 = std::move(bands.band95);
    out.replication_count = static_cast<int>(replicated.size());
    return out;
}

PermutationResult run_group_level(const PriceSeries& series, const Sample& sample,
                                  CumulativePath observed, std::size_t k,
                                  const PermutationSpec& spec) {
    if (spec.replications < 1) throw DomainError("replications must be at least 1");
    if (spec.pool != PlaceboPool::AllBusinessDays)
        throw DomainError("group-level placebo draws use the all-business-days pool");
    const auto pool = eligible_positions(series, spec.window);
    if (k == 0) throw DomainError("placebo draw size must be positive");
    if (k > pool.size())
        throw DomainError("eligible placebo pool (" + std::to_string(pool.size()) +
                          " dates) smaller than K = " + std::to_string(k));

    std::vector<std::vector<double>> replicated(static_cast<std::size_t>(spec.replications));
    for_each_replication(spec.replications, spec.threads, [&](int b) {
        auto rng = SplitMix64::substream(spec.seed, static_cast<std::uint64_t>(b));
        for (int attempt = 0;; ++attempt) {
            const auto idx = draw_indices(pool.size(), k, rng);
            std::vector<std::size_t> events(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) events[i] = pool[idx[i]];
            std::sort(events.begin(), events.end());
            try {
                replicated[static_cast<std::size_t>(b)] =
                    group_statistic(spec.statistic, sample, events);
                return;
            } catch (const RankError&) {
                // A draw whose windows cover every sample row cannot identify
                // the constant; redraw from the same substream.
                if (attempt + 1 >= kMaxRedraws) throw;
            }
        }
    });
    return summarize(std::move(observed), replicated, spec.window);
}

}  // namespace

bool is_difference(Statistic s) noexcept {
    return s == Statistic::OlsDifference || s == Statistic::LadDifference ||
           s == Statistic::MedianDifference;
}

std::vector<std::size_t> draw_indices(std::size_t n, std::size_t k, SplitMix64& rng) {
    if (k > n)
        throw DomainError("cannot draw " + std::to_string(k) + " of " + std::to_string(n) +
                          " without replacement");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

EventSet draw_placebo(std::span<const Date> pool, std::size_t k, SplitMix64& rng) {
    const auto idx = draw_indices(pool.size(), k, rng);
    std::vector<Event> events;
    events.reserve(k);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        Event e;
        e.date = pool[idx[i]];
        e.name = "placebo_" + std::to_string(i);
        events.push_back(std::move(e));
    }
    return EventSet(std::move(events));
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw DomainError("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

PercentileBands percentile_bands(const std::vector<std::vector<double>>& samples) {
    PercentileBands out;
    for (const auto& day : samples) {
        if (day.empty()) throw DomainError("percentile band needs at least one sample");
        double sum = 0.0;
        for (double v : day) sum += v;
        out.mean.push_back(sum / static_cast<double>(day.size()));
        out.band90.push_back({quantile(day, 0.05), quantile(day, 0.95)});
        out.band95.push_back({quantile(day, 0.025), quantile(day, 0.975)});
    }
    return out;
}

bool identical(const PermutationResult& a, const PermutationResult& b) {
    auto same = [](double x, double y) { return std::memcmp(&x, &y, sizeof x) == 0; };
    auto same_vec = [&](const std::vector<double>& x, const std::vector<double>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!same(x[i], y[i])) return false;
        return true;
    };
    auto same_bands = [&](const std::vector<Band>& x, const std::vector<Band>& y) {
        if (x.size() != y.size()) return false;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (!same(x[i].lo, y[i].lo) || !same(x[i].hi, y[i].hi)) return false;
        return true;
    };
    if (a.replication_count != b.replication_count) return false;
    if (a.observed.points.size() != b.observed.points.size()) return false;
    for (std::size_t i = 0; i < a.observed.points.size(); ++i) {
        const auto &p = a.observed.points[i], &q = b.observed.points[i];
        if (p.day != q.day || !same(p.estimate, q.estimate) || !same(p.se, q.se)) return false;
    }
    return same_vec(a.placebo_mean, b.placebo_mean) && same_bands(a.band90, b.band90) &&
           same_bands(a.band95, b.band95);
}

std::vector<std::size_t> eligible_positions(const PriceSeries& series, int window) {
    const auto w = static_cast<std::size_t>(window);
    std::vector<std::size_t> out;
    for (std::size_t p = w + 1; p + w < series.size(); ++p) out.push_back(p);
    return out;
}

PermutationResult permutation_group_level(const PriceSeries& series, const EventSet& events,
                                          const PermutationSpec& spec) {
    if (is_difference(spec.statistic))
        throw DomainError("group-level permutation needs a single-group statistic");
    if (events.empty()) throw DomainError("no events");
    const Sample sample = make_sample(series, spec.window);
    auto positions = event_positions(series, events, spec.window);
    std::sort(positions.begin(), positions.end());
    auto observed = bare_path("observed", spec.window,
                              group_statistic(spec.statistic, sample, positions));
    const std::size_t k = spec.k ? spec.k : events.size();
    return run_group_level(series, sample, std::move(observed), k, spec);
}

PermutationResult permutation_group_level(const PriceSeries& series, const GroupAssignment& groups,
                                          int group, const PermutationSpec& spec) {
    if (is_difference(spec.statistic))
        throw DomainError("group-level permutation needs a single-group statistic");
    if (group != 0 && group != 1) throw DomainError("group must be 0 (A) or 1 (B)");
    if (groups.group_a.empty() || groups.group_b.empty()) throw DomainError("empty event group");
    const Sample sample = make_sample(series, spec.window);
    const auto a = event_positions(series, groups.group_a, spec.window);
    const auto b = event_positions(series, groups.group_b, spec.window);

    std::vector<double> observed;
    if (spec.statistic == Statistic::MedianPath) {
        observed = median_change_at(sample.levels, group == 0 ? a : b, spec.window);
    } else {
        const auto design = build_design_at(
            sample.returns, {to_return_positions(a), to_return_positions(b)}, spec.window);
        const auto fit =
            spec.statistic == Statistic::OlsPath ? fit_ols(design) : fit_lad(design);
        observed = accumulate_path(design, fit, group).estimates();
    }
    const std::size_t k = spec.k ? spec.k : std::min(a.size(), b.size());
    return run_group_level(series, sample,
                           bare_path(group == 0 ? groups.label_a : groups.label_b, spec.window,
                                     observed),
                           k, spec);
}

PermutationResult permutation_comparison(const PriceSeries& series, const GroupAssignment& groups,
                                         const PermutationSpec& spec) {
    if (!is_difference(spec.statistic))
        throw DomainError("group comparison needs a difference statistic");
    if (spec.pool != PlaceboPool::PooledEventDates)
        throw DomainError("group comparison draws from the pooled event dates");
    if (spec.replications < 1) throw DomainError("replications must be at least 1");
    if (groups.group_a.empty() || groups.group_b.empty()) throw DomainError("empty event group");

    const Sample sample = make_sample(series, spec.window);
    auto a = event_positions(series, groups.group_a, spec.window);
    auto b = event_positions(series, groups.group_b, spec.window);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());

    std::vector<std::size_t> pool(a);
    pool.insert(pool.end(), b.begin(), b.end());
    std::sort(pool.begin(), pool.end());
    const std::size_t ka = spec.k_a ? spec.k_a : a.size();
    const std::size_t kb = spec.k_b ? spec.k_b : b.size();
    if (ka + kb > pool.size())
        throw DomainError("pooled event dates (" + std::to_string(pool.size()) +
                          ") fewer than K_A + K_B = " + std::to_string(ka + kb));

    auto observed = bare_path(groups.label_a + "-" + groups.label_b, spec.window,
                              difference_statistic(spec.statistic, sample, a, b));

    // The draw is oriented by the unordered pair {A, B}, so swapping the labels
    // swaps the two placebo samples and reflects the distribution exactly.
    const bool forward = std::tie(a, ka) <= std::tie(b, kb);

    std::vector<std::vector<double>> replicated(static_cast<std::size_t>(spec.replications));
    for_each_replication(spec.replications, spec.threads, [&](int rep) {
        auto rng = SplitMix64::substream(spec.seed, static_cast<std::uint64_t>(rep));
        for (int attempt = 0;; ++attempt) {
            const auto idx = draw_indices(pool.size(), ka + kb, rng);
            std::vector<std::size_t> first, second;
            const std::size_t k_first = forward ? ka : kb;
            for (std::size_t i = 0; i < idx.size(); ++i)
                (i < k_first ? first : second).push_back(pool[idx[i]]);
            std::sort(first.begin(), first.end());
            std::sort(second.begin(), second.end());
            const auto& sa = forward ? first : second;
            const auto& sb = forward ? second : first;
            try {
                replicated[static_cast<std::size_t>(rep)] =
                    difference_statistic(spec.statistic, sample, sa, sb);
                return;
            } catch (const RankError&) {
                if (attempt + 1 >= kMaxRedraws) throw;
            }
        }
    });
    return summarize(std::move(observed), replicated, spec.window);
}

Coverage coverage_assessment(const PriceSeries& series, const PermutationSpec& spec,
                             std::size_t group_size, int horizon, int hac_lags) {
    if (spec.replications < 1) throw DomainError("replications must be at least 1");
    if (horizon < -spec.window || horizon > spec.window)
        throw DomainError("horizon outside the event window");
    const Sample sample = make_sample(series, spec.window);
    const auto pool = eligible_positions(series, spec.window);
    if (group_size == 0 || group_size > pool.size())
        throw DomainError("eligible placebo pool smaller than the group size");

    std::vector<char> inside90(static_cast<std::size_t>(spec.replications));
    std::vector<char> inside95(static_cast<std::size_t>(spec.replications));
    for_each_replication(spec.replications, spec.threads, [&](int b) {
        auto rng = SplitMix64::substream(spec.seed, static_cast<std::uint64_t>(b));
        for (int attempt = 0;; ++attempt) {
            const auto idx = draw_indices(pool.size(), group_size, rng);
            std::vector<std::size_t> events(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) events[i] = pool[idx[i]] - 1;
            std::sort(events.begin(), events.end());
            try {
                const auto design = build_design_at(sample.returns, {events}, spec.window);
                const auto fit = fit_ols(design);
                const auto cov = hac_covariance(design, fit, hac_lags);
                const auto pt = cumulative_path(design, fit, cov, 0).at(horizon);
                inside90[static_cast<std::size_t>(b)] = pt.ci90_lo <= 0.0 && 0.0 <= pt.ci90_hi;
                inside95[static_cast<std::size_t>(b)] = pt.ci95_lo <= 0.0 && 0.0 <= pt.ci95_hi;
                return;
            } catch (const RankError&) {
                if (attempt + 1 >= kMaxRedraws) throw;
            }
        }
    });

    Coverage out;
    out.replications = spec.replications;
    out.coverage90 = static_cast<double>(std::count(inside90.begin(), inside90.end(), 1)) /
                     spec.replications;
    out.coverage95 = static_cast<double>(std::count(inside95.begin(), inside95.end(), 1)) /
                     spec.replications;
    return out;
}

}  // namespace evstudy
