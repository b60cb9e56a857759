#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "evstudy/calendar.hpp"
#include "evstudy/estimators.hpp"
#include "evstudy/events.hpp"
#include "evstudy/rng.hpp"

namespace evstudy {

enum class PlaceboPool { AllBusinessDays, PooledEventDates };

enum class Statistic {
    OlsPath,
    LadPath,
    MedianPath,
    OlsDifference,
    LadDifference,
    MedianDifference,
};

bool is_difference(Statistic s) noexcept;

/// Placebo inference settings. Draw sizes of 0 mean "use the default for the
/// operation" (the real group sizes, or the smaller group for panels).
struct PermutationSpec {
    int replications = 5000;
    PlaceboPool pool = PlaceboPool::AllBusinessDays;
    std::size_t k = 0;
    std::size_t k_a = 0;
    std::size_t k_b = 0;
    Statistic statistic = Statistic::OlsPath;
    std::uint64_t seed = 0;
    int window = 15;
    /// Worker threads; 0 uses the hardware concurrency. Results do not
    /// depend on this value.
    unsigned threads = 0;
};

struct Band {
    double lo = 0.0;
    double hi = 0.0;
    friend bool operator==(const Band&, const Band&) = default;
};

struct PercentileBands {
    std::vector<double> mean;
    std::vector<Band> band90;
    std::vector<Band> band95;
};

struct PermutationResult {
    CumulativePath observed;
    std::vector<double> placebo_mean;
    std::vector<Band> band90;
    std::vector<Band> band95;
    int replication_count = 0;
};

/// Bitwise comparison of every number in two results.
bool identical(const PermutationResult& a, const PermutationResult& b);

/// k distinct indices into [0, n) by a partial Fisher-Yates shuffle.
/// Throws DomainError when k > n.
std::vector<std::size_t> draw_indices(std::size_t n, std::size_t k, SplitMix64& rng);

/// k distinct pool entries as placebo events named "placebo_<i>".
EventSet draw_placebo(std::span<const Date> pool, std::size_t k, SplitMix64& rng);

/// Empirical quantile with linear interpolation between order statistics:
/// h = (n-1) q, x[floor h] + (h - floor h)(x[floor h + 1] - x[floor h]).
double quantile(std::vector<double> sorted_or_not, double q);

/// Mean and central 90% / 95% intervals per relative day; `samples[r]` holds
/// the replications for day index r.
PercentileBands percentile_bands(const std::vector<std::vector<double>>& samples);

/// Price-calendar positions whose +/-W window fits both the price series and
/// its returns: [W+1, N-1-W].
std::vector<std::size_t> eligible_positions(const PriceSeries& series, int window);

/// Placebo distribution of a single-group statistic (OlsPath, LadPath or
/// MedianPath) drawn from all eligible business days. The observed path is
/// the statistic on `events` pooled; K defaults to the event count.
PermutationResult permutation_group_level(const PriceSeries& series, const EventSet& events,
                                          const PermutationSpec& spec);

/// Same, for one group of a two-group panel: the observed path is that
/// group's path from the joint fit (or its median path) and K defaults to
/// the smaller group's size.
PermutationResult permutation_group_level(const PriceSeries& series, const GroupAssignment& groups,
                                          int group, const PermutationSpec& spec);

/// Placebo distribution of an A - B statistic (OlsDifference, LadDifference
/// or MedianDifference). Each replication splits the pooled event dates
/// (with multiplicity) into disjoint samples of sizes K_A and K_B.
PermutationResult permutation_comparison(const PriceSeries& series, const GroupAssignment& groups,
                                         const PermutationSpec& spec);

struct Coverage {
    double coverage90 = 0.0;
    double coverage95 = 0.0;
    int replications = 0;
};

/// Fraction of placebo draws (group_size business days each) whose HAC
/// confidence interval for the pooled OLS cumulative path at `horizon`
/// contains zero.
Coverage coverage_assessment(const PriceSeries& series, const PermutationSpec& spec,
                             std::size_t group_size, int horizon, int hac_lags);

}  // namespace evstudy
