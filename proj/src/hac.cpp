#include "evstudy/error.hpp"
#include "evstudy/estimators.hpp"

namespace evstudy {

HacCovariance hac_covariance(const Eigen::MatrixXd& x, const Eigen::VectorXd& residuals, int lag) {
    const Eigen::Index n = x.rows();
    if (residuals.size() != n) throw DomainError("residual length differs from design rows");
    if (lag < 0) throw DomainError("HAC lag must be non-negative");
    if (lag >= n)
        throw DomainError("HAC lag " + std::to_string(lag) + " must be below the row count " +
                          std::to_string(n));

    // Score contributions u_t = x_t * e_t, one per row.
    const Eigen::MatrixXd scores = x.array().colwise() * residuals.array();
    Eigen::MatrixXd meat = scores.transpose() * scores;
    for (int l = 1; l <= lag; ++l) {
        const double weight = 1.0 - static_cast<double>(l) / (lag + 1.0);
        const Eigen::MatrixXd gamma =
            scores.bottomRows(n - l).transpose() * scores.topRows(n - l);
        meat += weight * (gamma + gamma.transpose());
    }

    const Eigen::MatrixXd xtx = x.transpose() * x;
    const Eigen::MatrixXd bread = xtx.ldlt().solve(Eigen::MatrixXd::Identity(x.cols(), x.cols()));
    Eigen::MatrixXd cov = bread * meat * bread;

    HacCovariance out;
    out.matrix = 0.5 * (cov + cov.transpose());
    out.lag = lag;
    return out;
}

HacCovariance hac_covariance(const DesignMatrix& design, const RegressionFit& fit, int lag) {
    return hac_covariance(design.regressors, fit.residuals, lag);
}

}  // namespace evstudy
