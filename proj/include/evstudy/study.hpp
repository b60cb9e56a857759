#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evstudy/calendar.hpp"
#include "evstudy/config.hpp"
#include "evstudy/events.hpp"

namespace evstudy {

/// One estimation run: either a pooled event set or an A/B split. `tag` is
/// appended to output file names ("" for the main run).
struct Panel {
    std::string tag;
    EventSet pooled;
    std::optional<GroupAssignment> groups;
};

struct LoadedStudy {
    std::vector<PriceSeries> assets;
    EventSet events;
    std::vector<Panel> panels;
};

/// Reads every input named by the config, applies the year and openness
/// filters and the split rule. Errors carry the offending file name.
LoadedStudy load_study(const StudyConfig& config);

/// A file to write: path relative to the output directory plus contents.
struct OutputFile {
    std::string name;
    std::string contents;
};

enum class RunMode { Full, PermuteOnly };

/// Estimates every (asset, panel) pair and renders the outputs in memory.
/// Full mode always writes paths and tables and adds placebo bands when the
/// config enables them; PermuteOnly writes placebo bands (and coverage, if
/// enabled) only.
std::vector<OutputFile> compute_study(const StudyConfig& config, const LoadedStudy& study,
                                      RunMode mode);

/// load_study + compute_study + writes the files under config.output_dir.
/// Returns the written paths.
std::vector<std::string> run_study(const StudyConfig& config, RunMode mode = RunMode::Full);

/// Lower-case file-name-safe form of a label.
std::string file_label(const std::string& label);

}  // namespace evstudy
