#include <algorithm>
#include <limits>

#include "evstudy/error.hpp"
#include "evstudy/estimators.hpp"

namespace evstudy {

double median_of(std::vector<double> values) {
    if (values.empty()) throw DomainError("median of an empty set");
    const std::size_t n = values.size();
    const auto mid = values.begin() + static_cast<long>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    if (n % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

std::vector<double> median_change_at(std::span<const double> transformed,
                                     std::span<const std::size_t> positions, int w) {
    if (positions.empty()) throw DomainError("no events");
    if (w < 1) throw DomainError("window must be at least 1");
    const auto uw = static_cast<std::size_t>(w);
    for (std::size_t p : positions)
        if (p < uw || p + uw >= transformed.size())
            throw DomainError("event window leaves the series");

    std::vector<double> out;
    out.reserve(2 * uw + 1);
    std::vector<double> changes(positions.size());
    for (int r = -w; r <= w; ++r) {
        for (std::size_t i = 0; i < positions.size(); ++i) {
            const std::size_t p = positions[i];
            changes[i] = transformed[static_cast<std::size_t>(static_cast<long>(p) + r)] -
                         transformed[p - uw];
        }
        out.push_back(median_of(changes));
    }
    return out;
}

CumulativePath median_change(const PriceSeries& series, const EventSet& events, int w) {
    if (events.empty()) throw DomainError("no events");
    std::vector<std::size_t> positions;
    positions.reserve(events.size());
    for (const auto& e : events) {
        const std::size_t p = align_event_position(series.calendar(), e.date);
        if (p < static_cast<std::size_t>(w) || p + static_cast<std::size_t>(w) >= series.size())
            throw DomainError("event '" + e.name + "' lacks +/-" + std::to_string(w) +
                              " business days of coverage");
        positions.push_back(p);
    }
    const auto values = series.transformed_values();
    const auto medians = median_change_at(values, positions, w);

    CumulativePath path;
    path.label = "median";
    path.window = w;
    path.has_inference = false;
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (int r = -w; r <= w; ++r) {
        PathPoint pt;
        pt.day = r;
        pt.estimate = medians[static_cast<std::size_t>(r + w)];
        pt.se = pt.p_value = pt.ci90_lo = pt.ci90_hi = pt.ci95_lo = pt.ci95_hi = nan;
        path.points.push_back(pt);
    }
    return path;
}

}  // namespace evstudy
