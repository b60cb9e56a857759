#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "evstudy/calendar.hpp"
#include "evstudy/events.hpp"

namespace evstudy {

enum class Estimator { Ols, Lad };

/// What to estimate: one pooled event group or two groups (A, B) sharing a
/// constant, over a window of +/- `window` business days.
struct StudySpec {
    int window = 15;
    std::vector<EventSet> groups;
    std::vector<std::string> labels;
    Estimator estimator = Estimator::Ols;
    int hac_lags = 30;

    static StudySpec pooled(EventSet events, int window = 15, std::string label = "all");
    static StudySpec paired(const GroupAssignment& groups, int window = 15);
};

/// Window-day fixed-effect regression design.
///
/// Rows are the consecutive return dates from `window` business days before
/// the earliest event to `window` days after the latest one, inter-event gaps
/// included. Columns are one block of 2W+1 relative-day dummies per group,
/// then the constant. A dummy entry counts the events of that group whose
/// relative day s falls on the row's date, so overlapping windows add.
struct DesignMatrix {
    std::vector<Date> row_dates;
    Eigen::VectorXd response;
    Eigen::MatrixXd regressors;
    int window = 0;
    int group_count = 0;
    std::vector<std::string> labels;
    /// Position of the first row in the return calendar.
    std::size_t first_position = 0;

    Eigen::Index rows() const { return regressors.rows(); }
    Eigen::Index cols() const { return regressors.cols(); }
    int block_size() const { return 2 * window + 1; }

    /// Column of relative day `s` for `group` (0 = A or pooled, 1 = B).
    /// Throws DomainError outside [-W, W] or for an unknown group.
    Eigen::Index column_index(int group, int s) const;
    Eigen::Index constant_index() const { return cols() - 1; }
};

/// Aligns every event to the return calendar and builds the design.
/// Throws DomainError for an empty group or a window that leaves the return
/// calendar. A design with no row outside every window (the constant is then
/// a sum of dummies) is built as is; fitting it throws RankError.
DesignMatrix build_design(const ReturnSeries& returns, const StudySpec& spec);

/// Same, from event positions already aligned to `returns.calendar`.
DesignMatrix build_design_at(const ReturnSeries& returns,
                             const std::vector<std::vector<std::size_t>>& anchors, int window,
                             std::vector<std::string> labels = {});

/// Same, over the explicit return-position range [first, last] instead of
/// the span of the windows. The range must contain every window.
DesignMatrix build_design_at(const ReturnSeries& returns,
                             const std::vector<std::vector<std::size_t>>& anchors, int window,
                             std::optional<std::pair<std::size_t, std::size_t>> sample,
                             std::vector<std::string> labels = {});

/// Return-calendar positions of each group's aligned events.
std::vector<std::vector<std::size_t>> align_groups(const TradingCalendar& calendar,
                                                   const std::vector<EventSet>& groups);

/// Numerical rank with singular values below 1e-10 x largest treated as zero.
Eigen::Index numerical_rank(const Eigen::MatrixXd& x);

}  // namespace evstudy
