#include <doctest.h>

#include <cmath>

#include "evstudy/design.hpp"
#include "evstudy/error.hpp"
#include "evstudy/estimators.hpp"
#include "evstudy/synth.hpp"
#include "support.hpp"

using namespace evstudy;

TEST_CASE("walks") {
    const auto flat = generate_walk({.length = 50, .sigma = 0.0, .drift = 0.0, .start_level = 3.0});
    for (double v : flat.values()) CHECK(v == 3.0);

    const auto ramp = generate_walk({.length = 50, .sigma = 0.0, .drift = 0.25, .start_level = 1.0});
    for (std::size_t t = 0; t < 50; ++t) CHECK(ramp.values()[t] == doctest::Approx(1.0 + 0.25 * t));

    const auto golden = generate_walk({.length = 40, .sigma = 0.05, .seed = 123});
    CHECK(golden.values()[0] == 4.0);
    CHECK(golden.values()[1] == 4.0412301894773401);
    CHECK(golden.values()[2] == 4.035123309328613);
    CHECK(golden.values()[39] == 3.9818729032003453);
    CHECK(golden.calendar().front() == testing::ymd(2022, 9, 1));

    CHECK_THROWS_AS(generate_walk({.length = 31}), DomainError);
    CHECK_THROWS_AS(generate_walk({.sigma = -1.0}), DomainError);
}

TEST_CASE("weekday calendar skips weekends") {
    const auto cal = weekday_calendar(testing::ymd(2024, 6, 1), 6);  // a Saturday
    CHECK(cal.front() == testing::ymd(2024, 6, 3));
    CHECK(cal[4] == testing::ymd(2024, 6, 7));
    CHECK(cal[5] == testing::ymd(2024, 6, 10));
}

TEST_CASE("a single step moves the long difference by its size") {
    const auto base = generate_walk({.length = 100, .sigma = 0.0});
    const auto events = events_at(base.calendar(), {50}, "e");
    const auto s = inject_effects(base, {events, {}}, EffectProfile::step(0, 0, 0.1), 15);
    CHECK(s.values()[65] - s.values()[34] == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(s.values()[49] == base.values()[49]);
    CHECK(s.values()[50] == doctest::Approx(base.values()[50] + 0.1));
}

TEST_CASE("overlapping injections add") {
    const auto base = generate_walk({.length = 100, .sigma = 0.0});
    EffectProfile every;
    for (int s = -3; s <= 3; ++s) every.add(0, s, 1.0);
    const auto events = events_at(base.calendar(), {40, 43}, "e");
    const auto r = to_returns(inject_effects(base, {events, {}}, every, 3));
    // price positions 40..43 are covered by both windows
    CHECK(r.returns[36] == 1.0);
    CHECK(r.returns[39] == 2.0);
    CHECK(r.returns[42] == 2.0);
    CHECK(r.returns[45] == 1.0);
    CHECK(r.returns[46] == 0.0);
}

TEST_CASE("log series injections multiply") {
    const auto cal = weekday_calendar(testing::ymd(2024, 1, 1), 40);
    const PriceSeries eq("EQ", cal, std::vector<double>(40, 100.0), Transform::Log);
    const auto out = inject_effects(eq, {events_at(cal, {20}, "e"), {}}, EffectProfile::step(0, 0, std::log(1.1)), 5);
    CHECK(out.values()[19] == 100.0);
    CHECK(out.values()[20] == doctest::Approx(110.0));
    CHECK(out.values()[39] == doctest::Approx(110.0));
}

TEST_CASE("truncated windows are rejected") {
    const auto base = generate_walk({.length = 100, .sigma = 0.0});
    CHECK_THROWS_AS(inject_effects(base, {events_at(base.calendar(), {10}, "e"), {}}, {}, 15), DomainError);
    CHECK_THROWS_AS(inject_effects(base, {{}, events_at(base.calendar(), {90}, "e")}, {}, 15), DomainError);
}

TEST_CASE("noiseless recovery of a full profile") {
    const int w = 4;
    SplitMix64 rng(31);
    EffectProfile profile;
    for (int g = 0; g < 2; ++g)
        for (int s = -w; s <= w; ++s) profile.add(g, s, rng.normal());
    const auto base = generate_walk({.length = 300, .sigma = 0.0, .drift = 0.01, .window = w});
    const auto layout = overlapping_layout(300, 8, w);
    const GroupAssignment groups{events_at(base.calendar(), layout.a, "a"), events_at(base.calendar(), layout.b, "b")};
    const auto series = inject_effects(base, groups, profile, w);
    const auto design = build_design(to_returns(series), StudySpec::paired(groups, w));
    const auto fit = fit_ols(design);
    for (int g = 0; g < 2; ++g)
        for (int s = -w; s <= w; ++s)
            CHECK(std::abs(fit.coefficients(design.column_index(g, s)) - profile.at(g, s)) * 100.0 < 1e-9);
    CHECK(fit.coefficients(design.constant_index()) == doctest::Approx(0.01).epsilon(1e-10));
}

TEST_CASE("opposite steps give a +20 bp difference") {
    const auto base = generate_walk({.length = 400, .sigma = 0.0});
    const auto layout = overlapping_layout(400, 10, 15);
    const GroupAssignment groups{events_at(base.calendar(), layout.a, "a"), events_at(base.calendar(), layout.b, "b")};
    EffectProfile profile;
    profile.add(0, 0, 0.10).add(1, 0, -0.10);
    const auto series = inject_effects(base, groups, profile, 15);
    const auto design = build_design(to_returns(series), StudySpec::paired(groups, 15));
    const auto fit = fit_ols(design);
    const auto diff = difference_path(design, fit, hac_covariance(design, fit, 30));
    for (const auto& p : diff.points) CHECK(std::abs(p.estimate * 100.0 - (p.day >= 0 ? 20.0 : 0.0)) < 1e-9);
}

TEST_CASE("estimates are unbiased under noise") {
    const int seeds = 200;
    double sum = 0.0, sum2 = 0.0;
    for (int k = 0; k < seeds; ++k) {
        const auto base = generate_walk({.length = 300, .sigma = 0.05, .seed = static_cast<std::uint64_t>(k), .window = 5});
        const auto layout = overlapping_layout(300, 10, 5);
        const GroupAssignment groups{events_at(base.calendar(), layout.a, "a"), events_at(base.calendar(), layout.b, "b")};
        const auto series = inject_effects(base, groups, EffectProfile::step(0, 1, 0.1), 5);
        const auto design = build_design(to_returns(series), StudySpec::paired(groups, 5));
        const double est = fit_ols(design).coefficients(design.column_index(0, 1));
        sum += est;
        sum2 += est * est;
    }
    const double mean = sum / seeds;
    const double se = std::sqrt((sum2 / seeds - mean * mean) / (seeds - 1));
    CHECK(std::abs(mean - 0.1) <= 2.0 * se);
}

TEST_CASE("layouts") {
    const auto p = spaced_positions(100, 3, 15);
    CHECK(p == std::vector<std::size_t>{16, 50, 84});
    CHECK(spaced_positions(100, 0, 15).empty());
    CHECK_THROWS_AS(spaced_positions(20, 3, 15), DomainError);
    const auto l = overlapping_layout(400, 10, 15);
    for (std::size_t i = 0; i < 10; ++i) {
        CHECK(l.b[i] > l.a[i]);
        CHECK(l.b[i] - l.a[i] <= 15);
        CHECK(l.b[i] + 15 < 400);
    }
}
