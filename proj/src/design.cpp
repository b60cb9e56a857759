#include "evstudy/design.hpp"

#include <algorithm>

#include "evstudy/error.hpp"

namespace evstudy {

StudySpec StudySpec::pooled(EventSet events, int window, std::string label) {
    StudySpec spec;
    spec.window = window;
    spec.groups.push_back(std::move(events));
    spec.labels.push_back(std::move(label));
    return spec;
}

StudySpec StudySpec::paired(const GroupAssignment& groups, int window) {
    StudySpec spec;
    spec.window = window;
    spec.groups = {groups.group_a, groups.group_b};
    spec.labels = {groups.label_a, groups.label_b};
    return spec;
}

Eigen::Index DesignMatrix::column_index(int group, int s) const {
    if (group < 0 || group >= group_count)
        throw DomainError("group " + std::to_string(group) + " not in design");
    if (s < -window || s > window)
        throw DomainError("relative day " + std::to_string(s) + " outside [-" +
                          std::to_string(window) + ", " + std::to_string(window) + "]");
    return static_cast<Eigen::Index>(group) * block_size() + (s + window);
}

std::vector<std::vector<std::size_t>> align_groups(const TradingCalendar& calendar,
                                                   const std::vector<EventSet>& groups) {
    std::vector<std::vector<std::size_t>> anchors;
    anchors.reserve(groups.size());
    for (const auto& g : groups) {
        std::vector<std::size_t> pos;
        pos.reserve(g.size());
        for (const auto& e : g) pos.push_back(align_event_position(calendar, e.date));
        anchors.push_back(std::move(pos));
    }
    return anchors;
}

DesignMatrix build_design(const ReturnSeries& returns, const StudySpec& spec) {
    if (spec.window < 1) throw DomainError("window must be at least 1");
    if (spec.hac_lags < 0) throw DomainError("HAC lag must be non-negative");
    if (spec.groups.empty()) throw DomainError("no events");
    return build_design_at(returns, align_groups(returns.calendar, spec.groups), spec.window,
                           spec.labels);
}

DesignMatrix build_design_at(const ReturnSeries& returns,
                             const std::vector<std::vector<std::size_t>>& anchors, int window,
                             std::vector<std::string> labels) {
    return build_design_at(returns, anchors, window, std::nullopt, std::move(labels));
}

DesignMatrix build_design_at(const ReturnSeries& returns,
                             const std::vector<std::vector<std::size_t>>& anchors, int window,
                             std::optional<std::pair<std::size_t, std::size_t>> sample,
                             std::vector<std::string> labels) {
    if (window < 1) throw DomainError("window must be at least 1");
    if (anchors.empty()) throw DomainError("no events");
    std::size_t lo = SIZE_MAX, hi = 0;
    for (std::size_t g = 0; g < anchors.size(); ++g) {
        if (anchors[g].empty())
            throw DomainError("no events in group " +
                              (g < labels.size() ? labels[g] : std::to_string(g)));
        for (std::size_t p : anchors[g]) {
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
    }
    const auto w = static_cast<std::size_t>(window);
    const std::size_t n = returns.returns.size();
    if (lo < w || hi + w >= n) {
        const std::size_t bad = lo < w ? lo : hi;
        throw DomainError("event window truncated: event at " +
                          format_date(returns.calendar[bad]) + " lacks " + std::to_string(window) +
                          " business days of returns on one side");
    }

    DesignMatrix d;
    d.window = window;
    d.group_count = static_cast<int>(anchors.size());
    d.labels = std::move(labels);
    d.labels.resize(anchors.size());
    d.first_position = lo - w;
    std::size_t last = hi + w;
    if (sample) {
        if (sample->first > d.first_position || sample->second < last || sample->second >= n)
            throw DomainError("sample range must cover every event window and lie in the series");
        d.first_position = sample->first;
        last = sample->second;
    }
    const auto rows = static_cast<Eigen::Index>(last - d.first_position + 1);
    const Eigen::Index cols = d.group_count * d.block_size() + 1;

    d.row_dates.assign(returns.calendar.dates().begin() + static_cast<long>(d.first_position),
                       returns.calendar.dates().begin() + static_cast<long>(last) + 1);
    d.response = Eigen::Map<const Eigen::VectorXd>(returns.returns.data() + d.first_position, rows);
    d.regressors = Eigen::MatrixXd::Zero(rows, cols);
    d.regressors.col(cols - 1).setOnes();

    for (int g = 0; g < d.group_count; ++g) {
        for (std::size_t p : anchors[static_cast<std::size_t>(g)]) {
            for (int s = -window; s <= window; ++s) {
                const auto row = static_cast<Eigen::Index>(p - d.first_position) + s;
                d.regressors(row, d.column_index(g, s)) += 1.0;
            }
        }
    }

    return d;
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& x) {
    if (x.size() == 0) return 0;
    // Singular values of X equal those of R in X P = Q R.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(x);
    const Eigen::Index k = std::min(x.rows(), x.cols());
    const Eigen::MatrixXd r =
        qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(r);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    const double tol = 1e-10 * sv(0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++rank;
    return rank;
}

}  // namespace evstudy
