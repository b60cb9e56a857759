#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "evstudy/calendar.hpp"
#include "evstudy/design.hpp"
#include "evstudy/events.hpp"

namespace evstudy {

struct RegressionFit {
    Estimator estimator = Estimator::Ols;
    /// Window-day coefficients by design column, constant last.
    Eigen::VectorXd coefficients;
    Eigen::VectorXd residuals;
    /// Sum of squared residuals (OLS) or of absolute residuals (LAD).
    double objective = 0.0;
};

/// Least squares through a column-pivoted Householder QR. Throws RankError
/// if any singular value falls below 1e-10 x the largest.
RegressionFit fit_ols(const DesignMatrix& design);
RegressionFit fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

/// Least absolute deviations, solved exactly as a linear program.
///
/// The LP is the bounded dual  max y'a  s.t.  X'a = X'1/2,  0 <= a <= 1,
/// solved with a bounded-variable revised simplex (phase 1 on artificials,
/// Dantzig pricing with a Bland fallback on degenerate stalls). The optimal
/// basis picks p observations with zero residual; the coefficients are the
/// exact solution through them, so the reported optimum is a vertex and is
/// the same on every run. Throws RankError for rank-deficient X and
/// SolverError if the simplex does not terminate.
RegressionFit fit_lad(const DesignMatrix& design);
RegressionFit fit_lad(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

struct HacCovariance {
    Eigen::MatrixXd matrix;
    int lag = 0;
};

/// Newey-West sandwich (X'X)^-1 S (X'X)^-1 with Bartlett weights
/// 1 - l/(lag+1). Rows are taken as consecutive in time. lag = 0 gives the
/// White covariance. Throws DomainError unless 0 <= lag < rows.
HacCovariance hac_covariance(const DesignMatrix& design, const RegressionFit& fit, int lag);
HacCovariance hac_covariance(const Eigen::MatrixXd& x, const Eigen::VectorXd& residuals, int lag);

/// Two-sided standard normal tail probability of |z|.
double two_sided_p(double z);

inline constexpr double kZ90 = 1.6448536269514722;
inline constexpr double kZ95 = 1.959963984540054;

struct PathPoint {
    int day = 0;
    double estimate = 0.0;
    /// NaN when the path carries no analytic inference (LAD, medians).
    double se = 0.0;
    double p_value = 0.0;
    double ci90_lo = 0.0, ci90_hi = 0.0;
    double ci95_lo = 0.0, ci95_hi = 0.0;
};

/// Cumulative estimate per relative day r in [-W, W].
struct CumulativePath {
    std::string label;
    int window = 0;
    bool has_inference = false;
    std::vector<PathPoint> points;

    const PathPoint& at(int day) const { return points.at(static_cast<std::size_t>(day + window)); }
    std::vector<double> estimates() const;
};

/// Sum of the group's coefficients from -W to r, with SE sqrt(e' V e).
CumulativePath cumulative_path(const DesignMatrix& design, const RegressionFit& fit,
                               const HacCovariance& cov, int group);

/// Sum of (alpha_s - beta_s) from -W to r for the A - B contrast.
CumulativePath difference_path(const DesignMatrix& design, const RegressionFit& fit,
                               const HacCovariance& cov);

/// The constant (daily trend) with its inference, reported as day 0.
PathPoint constant_term(const DesignMatrix& design, const RegressionFit& fit,
                        const HacCovariance& cov);

/// Fills se/p/CI fields from an estimate and standard error.
PathPoint make_point(int day, double estimate, double se);

/// Prefix sums of a fit's coefficients without inference (LAD paths).
CumulativePath accumulate_path(const DesignMatrix& design, const RegressionFit& fit, int group);
CumulativePath accumulate_difference(const DesignMatrix& design, const RegressionFit& fit);

/// Median over events of f(y_{t_i+r}) - f(y_{t_i-w}) for r in [-w, w], on the
/// series' own calendar (levels for Level series, logs for Log series). Even
/// counts average the two middle values. Throws DomainError for an empty
/// event set or an event whose +/-w window leaves the calendar.
CumulativePath median_change(const PriceSeries& series, const EventSet& events, int w);

/// Same over transformed values and event positions into them.
std::vector<double> median_change_at(std::span<const double> transformed,
                                     std::span<const std::size_t> positions, int w);

double median_of(std::vector<double> values);

}  // namespace evstudy
