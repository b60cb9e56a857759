#pragma once

#include <chrono>
#include <vector>

#include <Eigen/Dense>

#include "evstudy/calendar.hpp"
#include "evstudy/rng.hpp"
#include "evstudy/synth.hpp"

namespace testing {

inline evstudy::Date ymd(int y, unsigned m, unsigned d) {
    using namespace std::chrono;
    return sys_days{year{y} / month{m} / day{d}};
}

/// Level series on a weekday calendar starting 2024-01-01.
inline evstudy::PriceSeries level_series(std::vector<double> values) {
    auto cal = evstudy::weekday_calendar(ymd(2024, 1, 1), values.size());
    return evstudy::PriceSeries("T", std::move(cal), std::move(values), evstudy::Transform::Level);
}

inline evstudy::ReturnSeries return_series(const std::vector<double>& returns) {
    std::vector<double> levels{0.0};
    for (double r : returns) levels.push_back(levels.back() + r);
    auto s = evstudy::to_returns(level_series(levels));
    s.returns = returns;  // exact, not re-differenced
    return s;
}

inline Eigen::VectorXd normals(Eigen::Index n, evstudy::SplitMix64& rng) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
    return v;
}

/// Dense random design with a constant column last.
inline Eigen::MatrixXd random_design(Eigen::Index n, Eigen::Index p, evstudy::SplitMix64& rng) {
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j + 1 < p; ++j) x(i, j) = rng.normal();
        x(i, p - 1) = 1.0;
    }
    return x;
}

}  // namespace testing
