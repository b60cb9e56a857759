#include "evstudy/study.hpp"

#include <algorithm>
#include <cctype>
#include <exception>
#include <filesystem>
#include <thread>

#include "evstudy/csv.hpp"
#include "evstudy/design.hpp"
#include "evstudy/error.hpp"
#include "evstudy/estimators.hpp"
#include "evstudy/ingest.hpp"
#include "evstudy/permutation.hpp"
#include "evstudy/report.hpp"

namespace evstudy {

namespace {

template <class F>
auto with_file(const std::string& path, F f) {
    try {
        return f(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const Error& e) {
        throw DomainError(path + ": " + e.what());
    }
}

EventSet attach_agi_shift(const EventSet& events, const PriceSeries& forecast, int window) {
    std::vector<Event> out;
    for (auto e : events) {
        if (!e.number(attr::agi_shift)) e.attributes[attr::agi_shift] = agi_forecast_shift(forecast, e, window);
        out.push_back(std::move(e));
    }
    return EventSet(std::move(out));
}

GroupAssignment relabel(GroupAssignment g, std::string a, std::string b) {
    g.label_a = std::move(a);
    g.label_b = std::move(b);
    return g;
}

struct AssetOutputs {
    std::vector<OutputFile> files;
    std::vector<TableColumn> columns;
    std::vector<CoverageRow> coverage;
};

Statistic single_statistic(EstimatorChoice e) {
    switch (e) {
        case EstimatorChoice::Ols: return Statistic::OlsPath;
        case EstimatorChoice::Lad: return Statistic::LadPath;
        default: return Statistic::MedianPath;
    }
}

Statistic difference_statistic(EstimatorChoice e) {
    switch (e) {
        case EstimatorChoice::Ols: return Statistic::OlsDifference;
        case EstimatorChoice::Lad: return Statistic::LadDifference;
        default: return Statistic::MedianDifference;
    }
}

std::string stem(const PriceSeries& series, const Panel& panel) {
    return file_label(series.asset_id()) + (panel.tag.empty() ? "" : "_" + file_label(panel.tag));
}

std::string column_header(const PriceSeries& series, const Panel& panel, const std::string& label) {
    std::string h = series.asset_id();
    if (!panel.tag.empty()) h += " " + panel.tag;
    return h + " " + label;
}

void estimate_panel(const StudyConfig& config, const PriceSeries& series, const Panel& panel,
                    AssetOutputs& out) {
    const int w = config.window;
    const double bp = bp_scale(series.transform());
    const std::string base = stem(series, panel);

    std::vector<std::string> labels;
    std::vector<EventSet> groups;
    if (panel.groups) {
        labels = {panel.groups->label_a, panel.groups->label_b};
        groups = {panel.groups->group_a, panel.groups->group_b};
    } else {
        labels = {"all"};
        groups = {panel.pooled};
    }

    std::vector<CumulativePath> paths;
    std::optional<CumulativePath> diff;
    std::optional<PathPoint> constant;
    if (config.estimator == EstimatorChoice::Median) {
        for (const auto& g : groups) paths.push_back(median_change(series, g, w));
        if (paths.size() == 2) {
            diff = paths[0];
            for (std::size_t i = 0; i < diff->points.size(); ++i)
                diff->points[i].estimate -= paths[1].points[i].estimate;
        }
    } else {
        StudySpec spec = panel.groups ? StudySpec::paired(*panel.groups, w)
                                      : StudySpec::pooled(panel.pooled, w);
        spec.hac_lags = config.hac_lags;
        const auto returns = to_returns(series);
        const auto design = build_design(returns, spec);
        if (config.estimator == EstimatorChoice::Ols) {
            const auto fit = fit_ols(design);
            const auto cov = hac_covariance(design, fit, config.hac_lags);
            for (int g = 0; g < design.group_count; ++g)
                paths.push_back(cumulative_path(design, fit, cov, g));
            if (design.group_count == 2) diff = difference_path(design, fit, cov);
            constant = constant_term(design, fit, cov);
        } else {
            // LAD optima need not be unique; fit the pair in a canonical order
            // so relabeling A and B only negates the difference.
            bool swap = false;
            if (design.group_count == 2) {
                auto pos = align_groups(returns.calendar, spec.groups);
                for (auto& p : pos) std::sort(p.begin(), p.end());
                swap = pos[1] < pos[0];
            }
            const auto fitted = swap ? build_design(returns, [&] {
                auto flipped = spec;
                std::swap(flipped.groups[0], flipped.groups[1]);
                std::swap(flipped.labels[0], flipped.labels[1]);
                return flipped;
            }()) : design;
            const auto fit = fit_lad(fitted);
            for (int g = 0; g < fitted.group_count; ++g)
                paths.push_back(accumulate_path(fitted, fit, swap ? 1 - g : g));
            if (fitted.group_count == 2) {
                diff = accumulate_difference(fitted, fit);
                if (swap)
                    for (auto& p : diff->points) p.estimate = -p.estimate;
            }
            PathPoint c;
            c.estimate = fit.coefficients(fitted.constant_index());
            c.se = c.p_value = c.ci90_lo = c.ci90_hi = c.ci95_lo = c.ci95_hi =
                std::numeric_limits<double>::quiet_NaN();
            constant = c;
        }
    }
    if (constant) constant = scale_point(*constant, bp);

    for (std::size_t g = 0; g < paths.size(); ++g) {
        auto scaled = scale_path(paths[g], bp);
        scaled.label = labels[g];
        out.files.push_back({base + "_" + file_label(labels[g]) + ".csv",
                             render_path_csv(scaled, constant)});
        out.columns.push_back({column_header(series, panel, labels[g]), scaled, constant});
    }
    if (diff) {
        auto scaled = scale_path(*diff, bp);
        scaled.label = "diff";
        out.files.push_back({base + "_diff.csv", render_path_csv(scaled)});
        out.columns.push_back({column_header(series, panel, "diff"), scaled, std::nullopt});
    }
}

void permute_panel(const StudyConfig& config, const PriceSeries& series, const Panel& panel,
                   AssetOutputs& out) {
    const double bp = bp_scale(series.transform());
    const std::string base = stem(series, panel);
    PermutationSpec spec;
    spec.replications = config.permutation.replications;
    spec.seed = config.permutation.seed;
    spec.threads = config.permutation.threads;
    spec.window = config.window;
    spec.statistic = single_statistic(config.estimator);

    std::size_t smallest = panel.pooled.size();
    if (panel.groups) {
        smallest = std::min(panel.groups->group_a.size(), panel.groups->group_b.size());
        for (int g = 0; g < 2; ++g) {
            const auto r = permutation_group_level(series, *panel.groups, g, spec);
            const auto& label = g == 0 ? panel.groups->label_a : panel.groups->label_b;
            out.files.push_back({base + "_" + file_label(label) + "_placebo.csv",
                                 render_placebo_csv(scale_result(r, bp))});
        }
        PermutationSpec cmp = spec;
        cmp.pool = PlaceboPool::PooledEventDates;
        cmp.statistic = difference_statistic(config.estimator);
        const auto r = permutation_comparison(series, *panel.groups, cmp);
        out.files.push_back({base + "_diff_placebo.csv", render_placebo_csv(scale_result(r, bp))});
    } else {
        const auto r = permutation_group_level(series, panel.pooled, spec);
        out.files.push_back({base + "_all_placebo.csv", render_placebo_csv(scale_result(r, bp))});
    }

    if (config.permutation.coverage) {
        const int horizon = config.permutation.horizon.value_or(config.window);
        const auto c = coverage_assessment(series, spec, smallest, horizon, config.hac_lags);
        out.coverage.push_back({series.asset_id(), panel.tag.empty() ? "all" : panel.tag, horizon, c});
    }
}

AssetOutputs process_asset(const StudyConfig& config, const LoadedStudy& study,
                           const PriceSeries& series, RunMode mode) {
    AssetOutputs out;
    for (const auto& panel : study.panels) {
        if (mode == RunMode::Full) estimate_panel(config, series, panel, out);
        if (mode == RunMode::PermuteOnly || config.permutation.enabled)
            permute_panel(config, series, panel, out);
    }
    return out;
}

}  // namespace

std::string file_label(const std::string& label) {
    std::string out;
    for (unsigned char c : label) {
        if (std::isalnum(c)) out += static_cast<char>(std::tolower(c));
        else if (!out.empty() && out.back() != '_') out += '_';
    }
    while (!out.empty() && out.back() == '_') out.pop_back();
    return out.empty() ? "x" : out;
}

LoadedStudy load_study(const StudyConfig& config) {
    validate_config(config);
    LoadedStudy study;
    for (const auto& a : config.assets) {
        study.assets.push_back(with_file(a.path, [&](const std::string& text) {
            return a.kind == AssetKind::Fred ? parse_fred_csv(text, a.id) : parse_ohlc_csv(text, a.id);
        }));
    }

    EventSet events = with_file(config.events_path, [](const std::string& t) { return parse_event_table(t); });
    if (config.years) events = events.filter_years(config.years->first, config.years->second);
    if (config.openness_filter) events = events.filter_openness(*config.openness_filter);
    if (events.empty()) throw DomainError("no events");

    const bool needs_agi = config.split == SplitRule::AgiSign || config.split == SplitRule::Interaction;
    if (needs_agi && config.forecast_path) {
        const auto forecast = with_file(*config.forecast_path,
                                        [](const std::string& t) { return parse_forecast_series(t); });
        events = attach_agi_shift(events, forecast, config.window);
    }

    switch (config.split) {
        case SplitRule::Pooled:
            study.panels.push_back({"", events, std::nullopt});
            break;
        case SplitRule::Openness:
            study.panels.push_back({"", events, split_by_openness(events)});
            break;
        case SplitRule::Median:
            study.panels.push_back(
                {"", events, relabel(split_by_median(events, config.split_argument), "high", "low")});
            break;
        case SplitRule::Country:
            study.panels.push_back({"", events,
                                    relabel(split_by_value(events, attr::country, config.split_argument),
                                            config.split_argument, "other")});
            break;
        case SplitRule::AgiSign:
            study.panels.push_back(
                {"", events, relabel(split_by_sign(events, attr::agi_shift), "sooner", "later")});
            break;
        case SplitRule::Interaction:
            for (auto o : {Openness::Open, Openness::Closed}) {
                const auto subset = events.filter_openness(o);
                study.panels.push_back({o == Openness::Open ? "open" : "closed", subset,
                                        relabel(split_by_sign(subset, attr::agi_shift), "sooner", "later")});
            }
            break;
    }
    for (const auto& p : study.panels) {
        if (p.groups && (p.groups->group_a.empty() || p.groups->group_b.empty()))
            throw DomainError("split leaves an empty group" +
                              (p.tag.empty() ? std::string() : " in panel '" + p.tag + "'"));
    }
    study.events = std::move(events);
    return study;
}

std::vector<OutputFile> compute_study(const StudyConfig& config, const LoadedStudy& study,
                                      RunMode mode) {
    const std::size_t n = study.assets.size();
    std::vector<AssetOutputs> results(n);
    std::vector<std::exception_ptr> errors(n);
    auto work = [&](std::size_t i) {
        try {
            results[i] = process_asset(config, study, study.assets[i], mode);
        } catch (const Error& e) {
            errors[i] = std::make_exception_ptr(
                DomainError(study.assets[i].asset_id() + ": " + e.what()));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (hw == 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n; ++i) pool.emplace_back(work, i);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<OutputFile> files;
    std::vector<TableColumn> columns;
    std::vector<CoverageRow> coverage;
    for (auto& r : results) {
        for (auto& f : r.files) files.push_back(std::move(f));
        for (auto& c : r.columns) columns.push_back(std::move(c));
        for (auto& c : r.coverage) coverage.push_back(std::move(c));
    }
    if (!columns.empty()) files.push_back({"table.txt", render_table(columns)});
    if (!coverage.empty()) files.push_back({"coverage.csv", render_coverage_csv(coverage)});
    return files;
}

std::vector<std::string> run_study(const StudyConfig& config, RunMode mode) {
    const auto study = load_study(config);
    const auto files = compute_study(config, study, mode);
    std::filesystem::create_directories(config.output_dir);
    std::vector<std::string> written;
    for (const auto& f : files) {
        const auto path = (std::filesystem::path(config.output_dir) / f.name).string();
        write_file(path, f.contents);
        written.push_back(path);
    }
    return written;
}

}  // namespace evstudy
