#include <cmath>
#include <limits>

#include "evstudy/error.hpp"
#include "evstudy/estimators.hpp"

namespace evstudy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_dimensions(const DesignMatrix& design, const RegressionFit& fit) {
    if (fit.coefficients.size() != design.cols())
        throw DomainError("fit has " + std::to_string(fit.coefficients.size()) +
                          " coefficients for a design with " + std::to_string(design.cols()) +
                          " columns");
}

void check_dimensions(const DesignMatrix& design, const RegressionFit& fit,
                      const HacCovariance& cov) {
    check_dimensions(design, fit);
    if (cov.matrix.rows() != design.cols() || cov.matrix.cols() != design.cols())
        throw DomainError("covariance dimension does not match the design");
}

PathPoint bare_point(int day, double estimate) {
    PathPoint pt;
    pt.day = day;
    pt.estimate = estimate;
    pt.se = pt.p_value = pt.ci90_lo = pt.ci90_hi = pt.ci95_lo = pt.ci95_hi = kNaN;
    return pt;
}

// Walks r = -W..W keeping the selector e_r; `coef` gives the selector's
// increment for relative day s as (column, sign) pairs.
template <class Increments>
CumulativePath selector_path(const DesignMatrix& design, const RegressionFit& fit,
                             const HacCovariance* cov, Increments increments) {
    CumulativePath path;
    path.window = design.window;
    path.has_inference = cov != nullptr;
    Eigen::VectorXd selector = Eigen::VectorXd::Zero(design.cols());
    double running = 0.0;
    for (int s = -design.window; s <= design.window; ++s) {
        double step = 0.0;
        for (auto [col, sign] : increments(s)) {
            selector(col) += sign;
            step += sign * fit.coefficients(col);
        }
        running += step;
        if (cov) {
            const double var = selector.dot(cov->matrix * selector);
            path.points.push_back(make_point(s, running, std::sqrt(std::max(var, 0.0))));
        } else {
            path.points.push_back(bare_point(s, running));
        }
    }
    return path;
}

std::string group_label(const DesignMatrix& design, int group) {
    const auto g = static_cast<std::size_t>(group);
    return g < design.labels.size() && !design.labels[g].empty() ? design.labels[g]
                                                                  : std::to_string(group);
}

}  // namespace

double two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

PathPoint make_point(int day, double estimate, double se) {
    PathPoint pt;
    pt.day = day;
    pt.estimate = estimate;
    pt.se = se;
    if (se > 0.0)
        pt.p_value = two_sided_p(estimate / se);
    else
        pt.p_value = estimate == 0.0 ? 1.0 : 0.0;
    pt.ci90_lo = estimate - kZ90 * se;
    pt.ci90_hi = estimate + kZ90 * se;
    pt.ci95_lo = estimate - kZ95 * se;
    pt.ci95_hi = estimate + kZ95 * se;
    return pt;
}

std::vector<double> CumulativePath::estimates() const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(p.estimate);
    return out;
}

CumulativePath cumulative_path(const DesignMatrix& design, const RegressionFit& fit,
                               const HacCovariance& cov, int group) {
    check_dimensions(design, fit, cov);
    auto path = selector_path(design, fit, &cov, [&](int s) {
        return std::vector<std::pair<Eigen::Index, double>>{{design.column_index(group, s), 1.0}};
    });
    path.label = group_label(design, group);
    return path;
}

CumulativePath difference_path(const DesignMatrix& design, const RegressionFit& fit,
                               const HacCovariance& cov) {
    check_dimensions(design, fit, cov);
    if (design.group_count != 2) throw DomainError("difference path needs a two-group design");
    auto path = selector_path(design, fit, &cov, [&](int s) {
        return std::vector<std::pair<Eigen::Index, double>>{{design.column_index(0, s), 1.0},
                                                            {design.column_index(1, s), -1.0}};
    });
    path.label = group_label(design, 0) + "-" + group_label(design, 1);
    return path;
}

PathPoint constant_term(const DesignMatrix& design, const RegressionFit& fit,
                        const HacCovariance& cov) {
    check_dimensions(design, fit, cov);
    const auto c = design.constant_index();
    return make_point(0, fit.coefficients(c), std::sqrt(std::max(cov.matrix(c, c), 0.0)));
}

CumulativePath accumulate_path(const DesignMatrix& design, const RegressionFit& fit, int group) {
    check_dimensions(design, fit);
    auto path = selector_path(design, fit, nullptr, [&](int s) {
        return std::vector<std::pair<Eigen::Index, double>>{{design.column_index(group, s), 1.0}};
    });
    path.label = group_label(design, group);
    return path;
}

CumulativePath accumulate_difference(const DesignMatrix& design, const RegressionFit& fit) {
    check_dimensions(design, fit);
    if (design.group_count != 2) throw DomainError("difference path needs a two-group design");
    auto path = selector_path(design, fit, nullptr, [&](int s) {
        return std::vector<std::pair<Eigen::Index, double>>{{design.column_index(0, s), 1.0},
                                                            {design.column_index(1, s), -1.0}};
    });
    path.label = group_label(design, 0) + "-" + group_label(design, 1);
    return path;
}

}  // namespace evstudy
