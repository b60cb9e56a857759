#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "evstudy/events.hpp"

namespace evstudy {

enum class AssetKind { Fred, Ohlc };

struct AssetSource {
    std::string id;
    std::string path;
    AssetKind kind = AssetKind::Fred;
};

enum class SplitRule { Pooled, Openness, Median, Country, AgiSign, Interaction };

enum class EstimatorChoice { Ols, Lad, Median };

struct PermutationSettings {
    bool enabled = false;
    int replications = 5000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    bool coverage = false;
    std::optional<int> horizon;  ///< unset: +window
};

/// Everything a study run needs. Relative paths are resolved against the
/// config file's directory when loaded from a file.
struct StudyConfig {
    std::vector<AssetSource> assets;
    std::string events_path;
    std::optional<std::string> forecast_path;
    SplitRule split = SplitRule::Openness;
    /// Attribute for Median splits, pivot value for Country splits.
    std::string split_argument;
    std::optional<Openness> openness_filter;
    int window = 15;
    int hac_lags = 30;
    EstimatorChoice estimator = EstimatorChoice::Ols;
    PermutationSettings permutation;
    std::string output_dir = "out";
    std::optional<std::pair<int, int>> years;
};

/// Parses a YAML config document. Throws ParseError on unknown keys, bad
/// values or missing required keys.
StudyConfig parse_config(std::string_view text, const std::string& base_dir = {});
StudyConfig load_config(const std::string& path);

/// "2023..2024" or a single year "2023".
std::pair<int, int> parse_year_range(std::string_view text);

EstimatorChoice parse_estimator(std::string_view text);

/// "pooled", "openness", "median:<attr>", "country:<value>", "agi_sign",
/// "interaction".
std::pair<SplitRule, std::string> parse_split(std::string_view text);

/// Checks W >= 1, lag >= 0, at least one asset, replications >= 1.
void validate_config(const StudyConfig& config);

}  // namespace evstudy
