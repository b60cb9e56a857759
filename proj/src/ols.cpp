#include "evstudy/error.hpp"
#include "evstudy/estimators.hpp"

namespace evstudy {

RegressionFit fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    if (x.rows() != y.size()) throw DomainError("design and response lengths differ");
    if (x.rows() < x.cols()) throw RankError("fewer rows than columns");

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    const Eigen::Index p = x.cols();
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues();
    if (p > 0 && (sv(0) == 0.0 || sv(p - 1) <= 1e-10 * sv(0)))
        throw RankError("design is rank deficient (condition beyond 1e10)");

    RegressionFit fit;
    fit.estimator = Estimator::Ols;
    fit.coefficients = qr.solve(y);
    fit.residuals = y - x * fit.coefficients;
    fit.objective = fit.residuals.squaredNorm();
    return fit;
}

RegressionFit fit_ols(const DesignMatrix& design) {
    return fit_ols(design.regressors, design.response);
}

}  // namespace evstudy
