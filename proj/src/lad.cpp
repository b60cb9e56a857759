#include <algorithm>
#include <cmath>
#include <limits>

#include "evstudy/error.hpp"
#include "evstudy/estimators.hpp"

namespace evstudy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Status { Basic, AtLower, AtUpper };

// Bounded-variable revised simplex for  min c'v  s.t.  A v = b,  lo <= v <= hi,
// specialised to the LAD dual: the first n columns of A are the rows of X
// (bounds [0, 1]) and the last p are signed unit artificials.
class LadSimplex {
public:
    LadSimplex(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& start)
        : x_(x), y_(y), n_(x.rows()), p_(x.cols()) {
        const Eigen::Index total = n_ + p_;
        value_.resize(total);
        lo_ = Eigen::VectorXd::Zero(total);
        hi_.resize(total);
        hi_.head(n_).setOnes();
        hi_.tail(p_).setConstant(kInf);
        status_.assign(static_cast<std::size_t>(total), Status::AtLower);
        sign_.resize(p_);

        rhs_ = 0.5 * x_.transpose() * Eigen::VectorXd::Ones(n_);
        for (Eigen::Index j = 0; j < n_; ++j) {
            value_(j) = start(j);
            status_[static_cast<std::size_t>(j)] = start(j) > 0.5 ? Status::AtUpper : Status::AtLower;
        }
        const Eigen::VectorXd gap = rhs_ - x_.transpose() * value_.head(n_);
        basis_.resize(static_cast<std::size_t>(p_));
        binv_ = Eigen::MatrixXd::Zero(p_, p_);
        for (Eigen::Index k = 0; k < p_; ++k) {
            sign_(k) = gap(k) >= 0.0 ? 1.0 : -1.0;
            value_(n_ + k) = std::abs(gap(k));
            basis_[static_cast<std::size_t>(k)] = n_ + k;
            status_[static_cast<std::size_t>(n_ + k)] = Status::Basic;
            binv_(k, k) = sign_(k);
        }
        scale_ = 1.0 + y_.cwiseAbs().maxCoeff();
    }

    void solve() {
        // Phase 1: drive the artificials to zero.
        cost_ = Eigen::VectorXd::Zero(n_ + p_);
        cost_.tail(p_).setOnes();
        iterate(1.0 + x_.cwiseAbs().maxCoeff());
        double infeasibility = 0.0;
        for (Eigen::Index k = 0; k < p_; ++k) infeasibility += value_(n_ + k);
        if (infeasibility > 1e-7 * (1.0 + rhs_.cwiseAbs().sum()))
            throw SolverError("LAD phase 1 ended infeasible");

        // Phase 2: artificials are pinned at zero.
        for (Eigen::Index k = 0; k < p_; ++k) {
            hi_(n_ + k) = 0.0;
            value_(n_ + k) = 0.0;
        }
        cost_.head(n_) = -y_;
        cost_.tail(p_).setZero();
        iterate(scale_);
        drive_out_artificials();
    }

    std::vector<Eigen::Index> basic_rows() const {
        std::vector<Eigen::Index> out(basis_.begin(), basis_.end());
        return out;
    }

    Eigen::VectorXd dual_point() const { return value_.head(n_); }

private:
    Eigen::VectorXd column(Eigen::Index j) const {
        if (j < n_) return x_.row(j).transpose();
        Eigen::VectorXd e = Eigen::VectorXd::Zero(p_);
        e(j - n_) = sign_(j - n_);
        return e;
    }

    bool fixed(Eigen::Index j) const { return hi_(j) - lo_(j) <= 0.0; }

    void refactor() {
        Eigen::MatrixXd b(p_, p_);
        for (Eigen::Index i = 0; i < p_; ++i) b.col(i) = column(basis_[static_cast<std::size_t>(i)]);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(b);
        if (!lu.isInvertible()) throw SolverError("LAD basis became singular");
        binv_ = lu.inverse();
        // Recompute basic values from the nonbasic ones.
        Eigen::VectorXd r = rhs_;
        for (Eigen::Index j = 0; j < n_; ++j)
            if (status_[static_cast<std::size_t>(j)] != Status::Basic) r -= value_(j) * x_.row(j).transpose();
        for (Eigen::Index k = 0; k < p_; ++k)
            if (status_[static_cast<std::size_t>(n_ + k)] != Status::Basic) r(k) -= sign_(k) * value_(n_ + k);
        const Eigen::VectorXd xb = binv_ * r;
        for (Eigen::Index i = 0; i < p_; ++i) value_(basis_[static_cast<std::size_t>(i)]) = xb(i);
    }

    void pivot(Eigen::Index row, Eigen::Index entering, const Eigen::VectorXd& alpha) {
        const double a = alpha(row);
        binv_.row(row) /= a;
        for (Eigen::Index i = 0; i < p_; ++i) {
            if (i == row || alpha(i) == 0.0) continue;
            binv_.row(i) -= alpha(i) * binv_.row(row);
        }
        basis_[static_cast<std::size_t>(row)] = entering;
        status_[static_cast<std::size_t>(entering)] = Status::Basic;
        if (++pivots_since_refactor_ >= 64) {
            refactor();
            pivots_since_refactor_ = 0;
        }
    }

    void iterate(double cost_scale) {
        const double dtol = 1e-11 * cost_scale;
        const double ptol = 1e-11;
        const long max_iter = 200 * (n_ + p_) + 1000;
        int degenerate_run = 0;

        for (long iter = 0; iter < max_iter; ++iter) {
            Eigen::VectorXd cb(p_);
            for (Eigen::Index i = 0; i < p_; ++i) cb(i) = cost_(basis_[static_cast<std::size_t>(i)]);
            const Eigen::VectorXd pi = binv_.transpose() * cb;
            const Eigen::VectorXd xpi = x_ * pi;

            const bool bland = degenerate_run > 50;
            Eigen::Index entering = -1;
            double best = 0.0;
            double direction = 0.0;
            auto consider = [&](Eigen::Index j, double d) {
                const auto st = status_[static_cast<std::size_t>(j)];
                if (st == Status::Basic || fixed(j)) return;
                double score = 0.0;
                double dir = 0.0;
                if (st == Status::AtLower && d < -dtol) {
                    score = -d;
                    dir = 1.0;
                } else if (st == Status::AtUpper && d > dtol) {
                    score = d;
                    dir = -1.0;
                }
                if (dir == 0.0) return;
                if (entering < 0 || (!bland && score > best)) {
                    entering = j;
                    best = score;
                    direction = dir;
                }
            };
            for (Eigen::Index j = 0; j < n_; ++j) consider(j, cost_(j) - xpi(j));
            for (Eigen::Index k = 0; k < p_; ++k) consider(n_ + k, cost_(n_ + k) - sign_(k) * pi(k));
            if (entering < 0) return;

            const Eigen::VectorXd alpha = binv_ * column(entering);
            // Moving the entering variable by t (in `direction`) changes basic
            // value i by -direction * alpha_i * t. Harris two-pass ratio test:
            // bound the step with relaxed bounds, then take the largest pivot
            // among rows blocking within that bound.
            auto ratio = [&](Eigen::Index i, double slack, bool& to_upper) {
                const double delta = -direction * alpha(i);
                const Eigen::Index b = basis_[static_cast<std::size_t>(i)];
                if (delta < 0.0) {
                    to_upper = false;
                    return (value_(b) - lo_(b) + slack) / -delta;
                }
                to_upper = true;
                if (hi_(b) == kInf) return kInf;
                return (hi_(b) - value_(b) + slack) / delta;
            };
            double bound = kInf;
            for (Eigen::Index i = 0; i < p_; ++i) {
                if (std::abs(alpha(i)) <= ptol) continue;
                bool up;
                bound = std::min(bound, ratio(i, 1e-9, up));
            }
            Eigen::Index leave = -1;
            bool leave_to_upper = false;
            double leave_step = kInf;
            for (Eigen::Index i = 0; i < p_; ++i) {
                if (std::abs(alpha(i)) <= ptol) continue;
                bool up;
                const double t = ratio(i, 0.0, up);
                if (t > bound) continue;
                bool take = leave < 0;
                if (!take) {
                    take = bland ? basis_[static_cast<std::size_t>(i)] <
                                       basis_[static_cast<std::size_t>(leave)]
                                 : std::abs(alpha(i)) > std::abs(alpha(leave));
                }
                if (take) {
                    leave = i;
                    leave_to_upper = up;
                    leave_step = std::max(t, 0.0);
                }
            }
            double step = hi_(entering) - lo_(entering);
            if (leave >= 0 && leave_step < step)
                step = leave_step;
            else
                leave = -1;
            if (step == kInf) throw SolverError("LAD linear program is unbounded");

            degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;
            for (Eigen::Index i = 0; i < p_; ++i)
                value_(basis_[static_cast<std::size_t>(i)]) -= direction * alpha(i) * step;
            value_(entering) += direction * step;

            if (leave < 0) {
                // Bound flip.
                status_[static_cast<std::size_t>(entering)] =
                    direction > 0 ? Status::AtUpper : Status::AtLower;
                value_(entering) = direction > 0 ? hi_(entering) : lo_(entering);
                continue;
            }
            const Eigen::Index out = basis_[static_cast<std::size_t>(leave)];
            status_[static_cast<std::size_t>(out)] = leave_to_upper ? Status::AtUpper : Status::AtLower;
            value_(out) = leave_to_upper ? hi_(out) : lo_(out);
            pivot(leave, entering, alpha);
        }
        throw SolverError("LAD simplex did not converge");
    }

    // Swap any artificial still basic (at zero) for an observation column.
    void drive_out_artificials() {
        for (Eigen::Index i = 0; i < p_; ++i) {
            if (basis_[static_cast<std::size_t>(i)] < n_) continue;
            const Eigen::RowVectorXd row = binv_.row(i) * x_.transpose();
            Eigen::Index best = -1;
            for (Eigen::Index j = 0; j < n_; ++j) {
                if (status_[static_cast<std::size_t>(j)] == Status::Basic) continue;
                if (std::abs(row(j)) > 1e-9 && (best < 0 || std::abs(row(j)) > std::abs(row(best))))
                    best = j;
            }
            if (best < 0) throw RankError("design is rank deficient");
            const Eigen::Index out = basis_[static_cast<std::size_t>(i)];
            const Eigen::VectorXd alpha = binv_ * column(best);
            status_[static_cast<std::size_t>(out)] = Status::AtLower;
            value_(out) = 0.0;
            pivot(i, best, alpha);
        }
    }

    const Eigen::MatrixXd& x_;
    const Eigen::VectorXd& y_;
    Eigen::Index n_, p_;
    Eigen::VectorXd rhs_, value_, lo_, hi_, cost_, sign_;
    std::vector<Status> status_;
    std::vector<Eigen::Index> basis_;
    Eigen::MatrixXd binv_;
    double scale_ = 1.0;
    int pivots_since_refactor_ = 0;
};

}  // namespace

RegressionFit fit_lad(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    if (x.rows() != y.size()) throw DomainError("design and response lengths differ");
    if (x.rows() < x.cols()) throw RankError("fewer rows than columns");
    if (numerical_rank(x) < x.cols()) throw RankError("design is rank deficient");

    // Warm start: observations above the least-squares fit start at a = 1.
    const RegressionFit ols = fit_ols(x, y);
    Eigen::VectorXd start(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) start(i) = ols.residuals(i) > 0.0 ? 1.0 : 0.0;

    LadSimplex lp(x, y, start);
    lp.solve();

    const auto rows = lp.basic_rows();
    const Eigen::Index p = x.cols();
    Eigen::MatrixXd xb(p, p);
    Eigen::VectorXd yb(p);
    for (Eigen::Index i = 0; i < p; ++i) {
        xb.row(i) = x.row(rows[static_cast<std::size_t>(i)]);
        yb(i) = y(rows[static_cast<std::size_t>(i)]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(xb);
    if (!lu.isInvertible()) throw SolverError("LAD optimal basis is singular");

    RegressionFit fit;
    fit.estimator = Estimator::Lad;
    fit.coefficients = lu.solve(yb);
    fit.residuals = y - x * fit.coefficients;
    fit.objective = fit.residuals.cwiseAbs().sum();

    // Strong duality: sum|e| = 2 y'a - sum(y) at the optimum.
    const double dual = 2.0 * y.dot(lp.dual_point()) - y.sum();
    const double scale = 1.0 + y.cwiseAbs().sum();
    if (std::abs(fit.objective - dual) > 1e-7 * scale)
        throw SolverError("LAD duality gap too large");
    return fit;
}

RegressionFit fit_lad(const DesignMatrix& design) {
    return fit_lad(design.regressors, design.response);
}

}  // namespace evstudy
