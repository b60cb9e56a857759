#include <doctest.h>

#include <cmath>

#include "evstudy/calendar.hpp"
#include "evstudy/error.hpp"
#include "evstudy/synth.hpp"

using namespace evstudy;
using namespace std::chrono;

namespace {

Date ymd(int y, unsigned m, unsigned d) { return sys_days{year{y} / month{m} / day{d}}; }

TradingCalendar cal_of(std::initializer_list<Date> d) { return TradingCalendar(std::vector<Date>(d)); }

PriceSeries level(std::vector<double> v) {
    auto cal = weekday_calendar(ymd(2024, 1, 1), v.size());
    return PriceSeries("x", std::move(cal), std::move(v), Transform::Level);
}

}  // namespace

TEST_CASE("parse_date accepts ISO and US forms") {
    CHECK(parse_date("2023-02-24") == ymd(2023, 2, 24));
    CHECK(parse_date("02/24/2023") == ymd(2023, 2, 24));
    CHECK_FALSE(parse_date("2023-02-30"));
    CHECK_FALSE(parse_date("13/01/2023"));
    CHECK_FALSE(parse_date("2023/01/01"));
    CHECK_FALSE(parse_date(""));
    CHECK(format_date(ymd(2025, 4, 4)) == "2025-04-04");
    CHECK(year_of(ymd(2025, 4, 4)) == 2025);
}

TEST_CASE("calendar must be strictly increasing") {
    CHECK_THROWS_AS(cal_of({ymd(2024, 1, 2), ymd(2024, 1, 2)}), DomainError);
    CHECK_THROWS_AS(cal_of({ymd(2024, 1, 3), ymd(2024, 1, 2)}), DomainError);
    CHECK_NOTHROW(cal_of({ymd(2024, 1, 2), ymd(2024, 1, 3)}));
}

TEST_CASE("to_returns on level and log series") {
    const auto r = to_returns(level({2.00, 2.05, 2.03}));
    REQUIRE(r.returns.size() == 2);
    CHECK(r.returns[0] == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(r.returns[1] == doctest::Approx(-0.02).epsilon(1e-12));
    CHECK(r.calendar.size() == 2);

    const auto cal3 = weekday_calendar(ymd(2024, 1, 1), 3);
    const auto flat = to_returns(PriceSeries("e", weekday_calendar(ymd(2024, 1, 1), 2), {100, 100}, Transform::Log));
    CHECK(flat.returns == std::vector<double>{0.0});
    const auto lg = to_returns(PriceSeries("e", cal3, {100, 110, 99}, Transform::Log));
    CHECK(lg.returns[0] == doctest::Approx(std::log(1.10)).epsilon(1e-14));
    CHECK(lg.returns[1] == doctest::Approx(std::log(0.90)).epsilon(1e-14));

    CHECK_THROWS_AS(to_returns(level({1.0})), DomainError);
    CHECK_THROWS_AS(PriceSeries("e", cal3, {100, 0, 99}, Transform::Log), DomainError);
    CHECK_THROWS_AS(PriceSeries("e", cal3, {100, NAN, 99}, Transform::Level), DomainError);
    CHECK_THROWS_AS(PriceSeries("e", cal3, {100, 99}, Transform::Level), DomainError);
}

TEST_CASE("return cumulation reproduces the transformed series") {
    const auto s = generate_walk({.length = 400, .sigma = 0.3, .drift = 0.01, .start_level = 50.0, .seed = 9});
    const auto r = to_returns(s);
    double acc = s.transformed(0);
    for (std::size_t t = 1; t < s.size(); ++t) {
        acc += r.returns[t - 1];
        CHECK(std::abs(acc - s.transformed(t)) <= 1e-12 * std::max(1.0, std::abs(acc)));
    }
}

TEST_CASE("align_event_date") {
    const auto cal = weekday_calendar(ymd(2025, 3, 31), 10);
    CHECK(align_event_date(cal, ymd(2025, 4, 2)) == ymd(2025, 4, 2));
    // Llama 4 came out on a Saturday.
    CHECK(align_event_date(cal, ymd(2025, 4, 5)) == ymd(2025, 4, 4));
    CHECK_THROWS_AS(align_event_date(cal, ymd(2025, 3, 30)), DomainError);

    // Friday holiday missing from the data: Sunday maps to Thursday.
    const auto gap = cal_of({ymd(2025, 4, 16), ymd(2025, 4, 17), ymd(2025, 4, 21)});
    CHECK(align_event_date(gap, ymd(2025, 4, 20)) == ymd(2025, 4, 17));

    for (int k = 0; k < 20; ++k) {
        const Date d = ymd(2025, 3, 31) + sys_days::duration{k};
        const Date a = align_event_date(cal, d);
        CHECK(align_event_date(cal, a) == a);
    }
}

TEST_CASE("relative_day_index") {
    const auto cal = weekday_calendar(ymd(2025, 3, 31), 20);
    CHECK(relative_day_index(cal, ymd(2025, 4, 2), 0) == ymd(2025, 4, 2));
    CHECK(relative_day_index(cal, ymd(2025, 4, 4), 1) == ymd(2025, 4, 7));
    CHECK(relative_day_index(cal, ymd(2025, 4, 7), -1) == ymd(2025, 4, 4));
    CHECK_THROWS_AS(relative_day_index(cal, cal[9], -15), DomainError);
    CHECK_THROWS_AS(relative_day_index(cal, ymd(2025, 4, 5), 0), DomainError);
    for (int s1 = -3; s1 <= 3; ++s1)
        for (int s2 = -3; s2 <= 3; ++s2) {
            const Date a = cal[10];
            CHECK(relative_day_index(cal, a, s1 + s2) ==
                  relative_day_index(cal, relative_day_index(cal, a, s1), s2));
        }
}

TEST_CASE("to_basis_points") {
    CHECK(to_basis_points(0.128) == doctest::Approx(12.8));
    CHECK(to_basis_points(0.0) == 0.0);
    CHECK(to_basis_points(-0.176) == doctest::Approx(-17.6));
}
