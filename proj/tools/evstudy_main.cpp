#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evstudy/config.hpp"
#include "evstudy/csv.hpp"
#include "evstudy/error.hpp"
#include "evstudy/ingest.hpp"
#include "evstudy/report.hpp"
#include "evstudy/study.hpp"
#include "evstudy/synth.hpp"

namespace {

using namespace evstudy;

struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> window;
    std::optional<int> hac_lags;
    std::optional<int> replications;
    std::optional<int> horizon;
    std::optional<std::string> years;
    std::optional<std::string> estimator;
    std::optional<std::string> output_dir;
    std::optional<unsigned> threads;
};

void add_study_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "Study config (YAML)")->required();
    cmd->add_option("--seed", o.seed, "Permutation seed");
    cmd->add_option("--window", o.window, "Event window W");
    cmd->add_option("--hac-lags", o.hac_lags, "Newey-West lag length");
    cmd->add_option("--replications", o.replications, "Permutation replications");
    cmd->add_option("--horizon", o.horizon, "Coverage horizon r");
    cmd->add_option("--years", o.years, "Event year filter, e.g. 2023..2024");
    cmd->add_option("--estimator", o.estimator, "ols|lad|median");
    cmd->add_option("--out", o.output_dir, "Output directory");
    cmd->add_option("--threads", o.threads, "Permutation worker threads (0 = all cores)");
}

StudyConfig resolve(const Overrides& o) {
    StudyConfig c = load_config(o.config);
    if (o.seed) c.permutation.seed = *o.seed;
    if (o.window) c.window = *o.window;
    if (o.hac_lags) c.hac_lags = *o.hac_lags;
    if (o.replications) c.permutation.replications = *o.replications;
    if (o.horizon) c.permutation.horizon = *o.horizon;
    if (o.years) c.years = parse_year_range(*o.years);
    if (o.estimator) c.estimator = parse_estimator(*o.estimator);
    if (o.output_dir) c.output_dir = *o.output_dir;
    if (o.threads) c.permutation.threads = *o.threads;
    validate_config(c);
    return c;
}

struct SynthOptions {
    std::string out = "synth";
    std::uint64_t seed = 1;
    std::size_t length = 750;
    double sigma = 0.05;
    double drift = 0.0;
    std::size_t per_group = 20;
    double effect_a = 0.10;
    double effect_b = -0.10;
    int effect_day = 0;
    int window = 15;
};

void run_synth(const SynthOptions& o) {
    SynthSpec spec;
    spec.length = o.length;
    spec.sigma = o.sigma;
    spec.drift = o.drift;
    spec.seed = o.seed;
    spec.window = o.window;
    const auto walk = generate_walk(spec);

    const auto layout = overlapping_layout(o.length, o.per_group, o.window);
    GroupAssignment groups{events_at(walk.calendar(), layout.a, "open_model_", Openness::Open),
                           events_at(walk.calendar(), layout.b, "closed_model_", Openness::Closed),
                           "open", "closed"};
    EffectProfile profile;
    profile.add(0, o.effect_day, o.effect_a).add(1, o.effect_day, o.effect_b);
    const auto series = inject_effects(walk, groups, profile, o.window);

    std::vector<Event> all(groups.group_a.begin(), groups.group_a.end());
    all.insert(all.end(), groups.group_b.begin(), groups.group_b.end());

    std::filesystem::create_directories(o.out);
    const auto dir = std::filesystem::path(o.out);
    write_file((dir / "SYNTH.csv").string(), render_fred_csv(series));
    write_file((dir / "events.csv").string(), render_event_table(EventSet(std::move(all))));
    write_file((dir / "study.yaml").string(),
               "assets:\n"
               "  - id: SYNTH\n"
               "    path: SYNTH.csv\n"
               "    kind: fred\n"
               "events: events.csv\n"
               "split: openness\n"
               "window: " + std::to_string(o.window) + "\n"
               "hac_lags: 30\n"
               "estimator: ols\n"
               "output_dir: out\n"
               "permutation:\n"
               "  replications: 200\n"
               "  seed: " + std::to_string(o.seed) + "\n");
    std::cout << "wrote " << (dir / "SYNTH.csv").string() << ", " << (dir / "events.csv").string()
              << ", " << (dir / "study.yaml").string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-study estimation around dated releases"};
    app.require_subcommand(1);

    Overrides run_o, perm_o, val_o;
    auto* run = app.add_subcommand("run", "Estimate paths and tables for every asset");
    add_study_flags(run, run_o);
    auto* permute = app.add_subcommand("permute", "Placebo bands (and coverage) only");
    add_study_flags(permute, perm_o);
    bool coverage = false;
    permute->add_flag("--coverage", coverage, "Also assess HAC interval coverage");
    auto* validate = app.add_subcommand("validate", "Parse the config and its inputs");
    add_study_flags(validate, val_o);

    SynthOptions so;
    auto* synth = app.add_subcommand("synth", "Write a synthetic series, event table and config");
    synth->add_option("--out", so.out, "Output directory");
    synth->add_option("--seed", so.seed, "Generator seed");
    synth->add_option("--length", so.length, "Trading days");
    synth->add_option("--sigma", so.sigma, "Daily volatility (percent)");
    synth->add_option("--drift", so.drift, "Daily drift (percent)");
    synth->add_option("--events-per-group", so.per_group, "Releases per group");
    synth->add_option("--effect-a", so.effect_a, "Injected return for group A (percent)");
    synth->add_option("--effect-b", so.effect_b, "Injected return for group B (percent)");
    synth->add_option("--effect-day", so.effect_day, "Relative day of the injection");
    synth->add_option("--window", so.window, "Event window W");

    std::vector<std::string> table_files;
    std::vector<std::string> table_headers;
    auto* table = app.add_subcommand("table", "Render a table from path CSVs");
    table->add_option("files", table_files, "Path CSVs")->required()->check(CLI::ExistingFile);
    table->add_option("--headers", table_headers, "Column headers (default: file stems)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            for (const auto& f : run_study(resolve(run_o), RunMode::Full)) std::cout << f << "\n";
        } else if (*permute) {
            auto c = resolve(perm_o);
            if (coverage) c.permutation.coverage = true;
            for (const auto& f : run_study(c, RunMode::PermuteOnly)) std::cout << f << "\n";
        } else if (*validate) {
            const auto c = resolve(val_o);
            const auto s = load_study(c);
            for (const auto& a : s.assets)
                std::cout << a.asset_id() << ": " << a.size() << " observations, "
                          << format_date(a.calendar().front()) << " to "
                          << format_date(a.calendar().back()) << "\n";
            std::cout << s.events.size() << " events\n";
            for (const auto& p : s.panels) {
                std::cout << "panel" << (p.tag.empty() ? "" : " " + p.tag) << ": ";
                if (p.groups)
                    std::cout << p.groups->label_a << " " << p.groups->group_a.size() << ", "
                              << p.groups->label_b << " " << p.groups->group_b.size() << "\n";
                else
                    std::cout << "pooled " << p.pooled.size() << "\n";
            }
            std::cout << "ok\n";
        } else if (*synth) {
            run_synth(so);
        } else if (*table) {
            if (!table_headers.empty() && table_headers.size() != table_files.size())
                throw DomainError("--headers needs one entry per file");
            std::vector<TableColumn> cols;
            for (std::size_t i = 0; i < table_files.size(); ++i) {
                const auto header = table_headers.empty()
                                        ? std::filesystem::path(table_files[i]).stem().string()
                                        : table_headers[i];
                try {
                    cols.push_back(parse_path_csv(read_file(table_files[i]), header));
                } catch (const Error& e) {
                    throw ParseError(table_files[i] + ": " + e.what());
                }
            }
            std::cout << render_table(cols);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
