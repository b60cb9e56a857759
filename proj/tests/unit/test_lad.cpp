#include <doctest.h>

#include <cmath>
#include <functional>

#include "evstudy/design.hpp"
#include "evstudy/error.hpp"
#include "evstudy/estimators.hpp"
#include "support.hpp"

using namespace evstudy;

namespace {

double abs_objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& b) {
    return (y - x * b).cwiseAbs().sum();
}

// Minimum absolute-deviation objective over every exact fit through p rows.
// Some LAD optimum always interpolates p observations, so this is the optimum.
double brute_force_lad(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const Eigen::Index n = x.rows(), p = x.cols();
    double best = INFINITY;
    std::vector<Eigen::Index> pick;
    std::function<void(Eigen::Index)> rec = [&](Eigen::Index from) {
        if (static_cast<Eigen::Index>(pick.size()) == p) {
            Eigen::MatrixXd xs(p, p);
            Eigen::VectorXd ys(p);
            for (Eigen::Index k = 0; k < p; ++k) {
                xs.row(k) = x.row(pick[static_cast<std::size_t>(k)]);
                ys(k) = y(pick[static_cast<std::size_t>(k)]);
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(xs);
            if (lu.rank() < p) return;
            best = std::min(best, abs_objective(x, y, lu.solve(ys)));
            return;
        }
        for (Eigen::Index i = from; i < n; ++i) {
            pick.push_back(i);
            rec(i + 1);
            pick.pop_back();
        }
    };
    rec(0);
    return best;
}

}  // namespace

TEST_CASE("LAD matches subset enumeration") {
    SplitMix64 rng(21);
    for (int trial = 0; trial < 60; ++trial) {
        const Eigen::Index n = 6 + trial % 6, p = 1 + trial % 4;
        const auto x = testing::random_design(n, p, rng);
        Eigen::VectorXd y = testing::normals(n, rng);
        if (trial % 3 == 0) y(0) += 50.0;
        const auto fit = fit_lad(x, y);
        const double oracle = brute_force_lad(x, y);
        CHECK(fit.objective == doctest::Approx(oracle).epsilon(1e-9));
        CHECK(abs_objective(x, y, fit.coefficients) == doctest::Approx(fit.objective).epsilon(1e-12));
    }
}

TEST_CASE("LAD on dummy designs matches subset enumeration") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> ret(30);
        for (auto& v : ret) v = rng.normal();
        const auto r = testing::return_series(ret);
        const auto d = build_design_at(r, {{4, 6, 12}}, 1);
        const auto fit = fit_lad(d);
        CHECK(fit.objective == doctest::Approx(brute_force_lad(d.regressors, d.response)).epsilon(1e-9));
    }
}

TEST_CASE("LAD never loses to OLS and equals it on exact fits") {
    SplitMix64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const Eigen::Index n = 10 + trial % 20, p = 1 + trial % 5;
        const auto x = testing::random_design(n, p, rng);
        const Eigen::VectorXd y = testing::normals(n, rng);
        const auto ols = fit_ols(x, y);
        const auto lad = fit_lad(x, y);
        CHECK(lad.objective <= abs_objective(x, y, ols.coefficients) * (1 + 1e-12));

        const Eigen::VectorXd exact = x * testing::normals(p, rng);
        const auto a = fit_lad(x, exact);
        const auto b = fit_ols(x, exact);
        CHECK((a.coefficients - b.coefficients).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("LAD trend ignores the size of an outlier") {
    SplitMix64 rng(14);
    std::vector<double> ret(80);
    for (auto& v : ret) v = rng.normal();
    auto with_outlier = [&](double size) {
        auto copy = ret;
        copy[70] = size;  // outside every window
        const auto r = testing::return_series(copy);
        return fit_lad(build_design_at(r, {{20, 40}}, 3));
    };
    const auto a = with_outlier(10.0);
    const auto b = with_outlier(1e4);
    const auto d = build_design_at(testing::return_series(ret), {{20, 40}}, 3);
    CHECK(a.coefficients(d.constant_index()) == b.coefficients(d.constant_index()));
    CHECK((a.coefficients - b.coefficients).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("LAD is deterministic and rejects rank deficiency") {
    SplitMix64 rng(2);
    const auto x = testing::random_design(40, 5, rng);
    const Eigen::VectorXd y = testing::normals(40, rng);
    const auto a = fit_lad(x, y);
    const auto b = fit_lad(x, y);
    CHECK(a.coefficients == b.coefficients);
    CHECK(a.residuals.size() == 40);

    Eigen::MatrixXd bad = x;
    bad.col(0) = bad.col(1) * 2.0;
    CHECK_THROWS_AS(fit_lad(bad, y), RankError);
}

TEST_CASE("zero coefficients give a zero path") {
    const auto d = build_design_at(testing::return_series(std::vector<double>(40, 0.0)), {{10, 25}}, 3);
    const auto fit = fit_lad(d);
    for (double v : accumulate_path(d, fit, 0).estimates()) CHECK(v == 0.0);
}
