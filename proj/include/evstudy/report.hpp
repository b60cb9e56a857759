#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evstudy/calendar.hpp"
#include "evstudy/estimators.hpp"
#include "evstudy/permutation.hpp"

namespace evstudy {

/// Basis points per unit of the transformed series: 100 for yields in
/// percent, 10000 for log prices.
double bp_scale(Transform transform) noexcept;

/// Multiplies estimates, standard errors and interval ends by `factor`.
CumulativePath scale_path(CumulativePath path, double factor);
PathPoint scale_point(PathPoint point, double factor);
PermutationResult scale_result(PermutationResult result, double factor);

/// One decimal, half away from zero; a negative value that rounds to zero
/// prints as "-0.0".
std::string format_estimate(double value);

/// Two decimals, or "<0.01" below 0.005.
std::string format_p(double p);

/// "*" for p < 0.10, "**" for p < 0.05, "***" for p < 0.01.
std::string stars(double p);

/// "est (p)stars"; just "est" when p is NaN.
std::string format_cell(double estimate_bp, double p);

struct TableColumn {
    std::string header;
    CumulativePath path;  // in basis points
    std::optional<PathPoint> constant;
};

/// Plain-text table: one row per relative day, then a "Constant" row when
/// any column carries one. Throws DomainError when the columns' day ranges
/// differ or there are no columns.
std::string render_table(const std::vector<TableColumn>& columns);

/// Path CSV: relative_day,estimate_bp,se,p_value,ci90_lo,ci90_hi,ci95_lo,ci95_hi.
/// Values are in basis points, empty where there is no inference. The
/// constant, if given, is a final row with relative_day "constant".
std::string render_path_csv(const CumulativePath& path_bp,
                            const std::optional<PathPoint>& constant_bp = std::nullopt);

/// Inverse of render_path_csv.
TableColumn parse_path_csv(std::string_view text, std::string header);

/// Placebo CSV: relative_day,observed_bp,placebo_mean_bp,band90_lo,band90_hi,
/// band95_lo,band95_hi.
std::string render_placebo_csv(const PermutationResult& result_bp);

struct CoverageRow {
    std::string asset;
    std::string group;
    int horizon = 0;
    Coverage coverage;
};

std::string render_coverage_csv(const std::vector<CoverageRow>& rows);

}  // namespace evstudy
