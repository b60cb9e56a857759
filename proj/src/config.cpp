#include "evstudy/config.hpp"

#include <filesystem>
#include <set>

#include <yaml-cpp/yaml.h>

#include "evstudy/csv.hpp"
#include "evstudy/error.hpp"

namespace evstudy {

namespace {

std::string resolve(const std::string& base, const std::string& path) {
    if (base.empty() || std::filesystem::path(path).is_absolute()) return path;
    return (std::filesystem::path(base) / path).lexically_normal().string();
}

void check_keys(const YAML::Node& node, const std::set<std::string>& allowed,
                const std::string& where) {
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.count(key)) throw ParseError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
T get(const YAML::Node& node, const std::string& key) {
    try {
        return node[key].as<T>();
    } catch (const YAML::Exception&) {
        throw ParseError("bad value for '" + key + "'");
    }
}

AssetKind parse_kind(const std::string& s) {
    if (s == "fred") return AssetKind::Fred;
    if (s == "ohlc") return AssetKind::Ohlc;
    throw ParseError("asset kind must be fred or ohlc, got '" + s + "'");
}

}  // namespace

std::pair<int, int> parse_year_range(std::string_view text) {
    const auto t = trim(text);
    const auto dots = t.find("..");
    auto year = [](std::string_view s) {
        const auto v = parse_number(s);
        if (!v || *v != static_cast<int>(*v)) throw ParseError("bad year '" + std::string(s) + "'");
        return static_cast<int>(*v);
    };
    if (dots == std::string_view::npos) {
        const int y = year(t);
        return {y, y};
    }
    const int a = year(t.substr(0, dots));
    const int b = year(t.substr(dots + 2));
    if (a > b) throw ParseError("year range '" + std::string(t) + "' is reversed");
    return {a, b};
}

EstimatorChoice parse_estimator(std::string_view text) {
    if (text == "ols") return EstimatorChoice::Ols;
    if (text == "lad") return EstimatorChoice::Lad;
    if (text == "median") return EstimatorChoice::Median;
    throw ParseError("estimator must be ols, lad or median, got '" + std::string(text) + "'");
}

std::pair<SplitRule, std::string> parse_split(std::string_view text) {
    const auto colon = text.find(':');
    const std::string rule(trim(text.substr(0, colon)));
    const std::string arg = colon == std::string_view::npos ? "" : std::string(trim(text.substr(colon + 1)));
    auto no_arg = [&](SplitRule r) {
        if (!arg.empty()) throw ParseError("split '" + rule + "' takes no argument");
        return std::pair{r, arg};
    };
    if (rule == "pooled") return no_arg(SplitRule::Pooled);
    if (rule == "openness") return no_arg(SplitRule::Openness);
    if (rule == "agi_sign") return no_arg(SplitRule::AgiSign);
    if (rule == "interaction") return no_arg(SplitRule::Interaction);
    if (rule == "median" || rule == "country") {
        if (arg.empty()) throw ParseError("split '" + rule + "' needs an argument");
        return {rule == "median" ? SplitRule::Median : SplitRule::Country, arg};
    }
    throw ParseError("unknown split rule '" + std::string(text) + "'");
}

StudyConfig parse_config(std::string_view text, const std::string& base_dir) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::Exception& e) {
        throw ParseError(std::string("config is not valid YAML: ") + e.what());
    }
    if (!root.IsMap()) throw ParseError("config must be a mapping");
    check_keys(root,
               {"assets", "events", "forecast", "split", "openness", "window", "hac_lags",
                "estimator", "permutation", "output_dir", "years"},
               "config");

    StudyConfig c;
    if (!root["assets"] || !root["assets"].IsSequence())
        throw ParseError("config needs an 'assets' list");
    for (const auto& a : root["assets"]) {
        check_keys(a, {"id", "path", "kind"}, "asset");
        if (!a["path"]) throw ParseError("asset without 'path'");
        AssetSource src;
        src.path = resolve(base_dir, get<std::string>(a, "path"));
        src.kind = a["kind"] ? parse_kind(get<std::string>(a, "kind")) : AssetKind::Fred;
        src.id = a["id"] ? get<std::string>(a, "id") : std::filesystem::path(src.path).stem().string();
        c.assets.push_back(std::move(src));
    }
    if (!root["events"]) throw ParseError("config needs 'events'");
    c.events_path = resolve(base_dir, get<std::string>(root, "events"));
    if (root["forecast"]) c.forecast_path = resolve(base_dir, get<std::string>(root, "forecast"));
    if (root["split"]) std::tie(c.split, c.split_argument) = parse_split(get<std::string>(root, "split"));
    if (root["openness"]) {
        const auto o = get<std::string>(root, "openness");
        if (o == "open") c.openness_filter = Openness::Open;
        else if (o == "closed") c.openness_filter = Openness::Closed;
        else throw ParseError("openness must be open or closed");
    }
    if (root["window"]) c.window = get<int>(root, "window");
    if (root["hac_lags"]) c.hac_lags = get<int>(root, "hac_lags");
    if (root["estimator"]) c.estimator = parse_estimator(get<std::string>(root, "estimator"));
    if (root["output_dir"]) c.output_dir = resolve(base_dir, get<std::string>(root, "output_dir"));
    else c.output_dir = resolve(base_dir, c.output_dir);
    if (root["years"]) c.years = parse_year_range(get<std::string>(root, "years"));
    if (const auto p = root["permutation"]) {
        check_keys(p, {"enabled", "replications", "seed", "threads", "coverage", "horizon"},
                   "permutation");
        auto& s = c.permutation;
        if (p["enabled"]) s.enabled = get<bool>(p, "enabled");
        if (p["replications"]) s.replications = get<int>(p, "replications");
        if (p["seed"]) s.seed = get<std::uint64_t>(p, "seed");
        if (p["threads"]) s.threads = get<unsigned>(p, "threads");
        if (p["coverage"]) s.coverage = get<bool>(p, "coverage");
        if (p["horizon"]) s.horizon = get<int>(p, "horizon");
    }
    validate_config(c);
    return c;
}

StudyConfig load_config(const std::string& path) {
    const std::string text = read_file(path);
    try {
        return parse_config(text, std::filesystem::path(path).parent_path().string());
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void validate_config(const StudyConfig& c) {
    if (c.assets.empty()) throw ParseError("config lists no assets");
    if (c.window < 1) throw ParseError("window must be at least 1");
    if (c.hac_lags < 0) throw ParseError("hac_lags must be non-negative");
    if (c.permutation.replications < 1) throw ParseError("replications must be at least 1");
    if (c.permutation.horizon && (*c.permutation.horizon < -c.window || *c.permutation.horizon > c.window))
        throw ParseError("horizon must lie in [-window, window]");
    std::set<std::string> ids;
    for (const auto& a : c.assets)
        if (!ids.insert(a.id).second) throw ParseError("duplicate asset id '" + a.id + "'");
}

}  // namespace evstudy
