#include "evstudy/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "evstudy/csv.hpp"
#include "evstudy/error.hpp"

namespace evstudy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fixed(double value, int decimals) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
    return std::string(buf, res.ptr);
}

// Rounds half away from zero at `decimals` places. The scaled value is first
// snapped to 9 significant decimals so that e.g. 0.125 stored as
// 0.12499999999999999 still counts as a tie.
double round_half_away(double value, int decimals) {
    const double scale = std::pow(10.0, decimals);
    double scaled = value * scale;
    const double snapped = std::round(scaled * 1e6) / 1e6;
    if (std::abs(snapped - scaled) < 1e-9 * std::max(1.0, std::abs(scaled))) scaled = snapped;
    return std::round(scaled) / scale;
}

std::string number_or_empty(double v) { return std::isnan(v) ? std::string() : format_number(v); }

double parse_or_nan(const std::string& field, std::size_t row) {
    if (trim(field).empty()) return kNaN;
    const auto v = parse_number(field);
    if (!v) throw ParseError("non-numeric value '" + field + "'", row);
    return *v;
}

}  // namespace

double bp_scale(Transform transform) noexcept {
    return transform == Transform::Log ? 10000.0 : 100.0;
}

PathPoint scale_point(PathPoint p, double factor) {
    p.estimate *= factor;
    p.se *= factor;
    p.ci90_lo *= factor;
    p.ci90_hi *= factor;
    p.ci95_lo *= factor;
    p.ci95_hi *= factor;
    return p;
}

CumulativePath scale_path(CumulativePath path, double factor) {
    for (auto& p : path.points) p = scale_point(p, factor);
    return path;
}

PermutationResult scale_result(PermutationResult result, double factor) {
    result.observed = scale_path(std::move(result.observed), factor);
    for (auto& m : result.placebo_mean) m *= factor;
    for (auto* bands : {&result.band90, &result.band95})
        for (auto& b : *bands) {
            b.lo *= factor;
            b.hi *= factor;
        }
    return result;
}

std::string format_estimate(double value) {
    const double r = round_half_away(value, 1);
    std::string out = fixed(std::abs(r), 1);
    if (value < 0.0) out.insert(0, "-");
    return out;
}

std::string format_p(double p) {
    if (p < 0.005) return "<0.01";
    return fixed(round_half_away(p, 2), 2);
}

std::string stars(double p) {
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.10) return "*";
    return "";
}

std::string format_cell(double estimate_bp, double p) {
    std::string cell = format_estimate(estimate_bp);
    if (std::isnan(p)) return cell;
    return cell + " (" + format_p(p) + ")" + stars(p);
}

std::string render_table(const std::vector<TableColumn>& columns) {
    if (columns.empty()) throw DomainError("no columns to render");
    const int window = columns.front().path.window;
    for (const auto& c : columns) {
        if (c.path.window != window ||
            c.path.points.size() != static_cast<std::size_t>(2 * window + 1))
            throw DomainError("column '" + c.header + "' covers a different day range");
        for (std::size_t i = 0; i < c.path.points.size(); ++i)
            if (c.path.points[i].day != -window + static_cast<int>(i))
                throw DomainError("column '" + c.header + "' covers a different day range");
    }
    const bool any_constant =
        std::any_of(columns.begin(), columns.end(), [](const auto& c) { return c.constant.has_value(); });

    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> head{"Day"};
    for (const auto& c : columns) head.push_back(c.header);
    cells.push_back(std::move(head));
    for (int r = -window; r <= window; ++r) {
        std::vector<std::string> row{std::to_string(r)};
        for (const auto& c : columns) {
            const auto& pt = c.path.at(r);
            row.push_back(format_cell(pt.estimate, pt.p_value));
        }
        cells.push_back(std::move(row));
    }
    if (any_constant) {
        std::vector<std::string> row{"Constant"};
        for (const auto& c : columns)
            row.push_back(c.constant ? format_cell(c.constant->estimate, c.constant->p_value) : "");
        cells.push_back(std::move(row));
    }

    std::vector<std::size_t> width(cells.front().size(), 0);
    for (const auto& row : cells)
        for (std::size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], row[j].size());
    std::string out;
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j == 0) {
                line += row[j] + std::string(width[j] - row[j].size(), ' ');
            } else {
                line += "  " + std::string(width[j] - row[j].size(), ' ') + row[j];
            }
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + "\n";
    }
    return out;
}

std::string render_path_csv(const CumulativePath& path, const std::optional<PathPoint>& constant) {
    std::string out = csv_line({"relative_day", "estimate_bp", "se", "p_value", "ci90_lo",
                                "ci90_hi", "ci95_lo", "ci95_hi"});
    auto emit = [&](const std::string& day, const PathPoint& p) {
        out += csv_line({day, format_number(p.estimate), number_or_empty(p.se),
                         number_or_empty(p.p_value), number_or_empty(p.ci90_lo),
                         number_or_empty(p.ci90_hi), number_or_empty(p.ci95_lo),
                         number_or_empty(p.ci95_hi)});
    };
    for (const auto& p : path.points) emit(std::to_string(p.day), p);
    if (constant) emit("constant", *constant);
    return out;
}

TableColumn parse_path_csv(std::string_view text, std::string header) {
    const RawTable table = read_csv(text);
    const char* names[] = {"relative_day", "estimate_bp", "se", "p_value",
                           "ci90_lo", "ci90_hi", "ci95_lo", "ci95_hi"};
    std::size_t idx[8];
    for (std::size_t k = 0; k < 8; ++k) {
        const auto c = table.column(names[k]);
        if (!c) throw ParseError(std::string("missing column '") + names[k] + "'", 0);
        idx[k] = *c;
    }

    TableColumn col;
    col.header = std::move(header);
    col.path.label = col.header;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t rownum = i + 1;
        PathPoint p;
        p.estimate = parse_or_nan(row[idx[1]], rownum);
        if (std::isnan(p.estimate)) throw ParseError("missing estimate", rownum);
        p.se = parse_or_nan(row[idx[2]], rownum);
        p.p_value = parse_or_nan(row[idx[3]], rownum);
        p.ci90_lo = parse_or_nan(row[idx[4]], rownum);
        p.ci90_hi = parse_or_nan(row[idx[5]], rownum);
        p.ci95_lo = parse_or_nan(row[idx[6]], rownum);
        p.ci95_hi = parse_or_nan(row[idx[7]], rownum);
        const std::string day(trim(row[idx[0]]));
        if (day == "constant") {
            col.constant = p;
            continue;
        }
        const auto d = parse_number(day);
        if (!d || *d != std::floor(*d)) throw ParseError("bad relative_day '" + day + "'", rownum);
        p.day = static_cast<int>(*d);
        col.path.points.push_back(p);
    }
    if (col.path.points.empty()) throw ParseError("no path rows", 0);
    const int first = col.path.points.front().day;
    col.path.window = -first;
    col.path.has_inference = !std::isnan(col.path.points.front().se);
    for (std::size_t i = 0; i < col.path.points.size(); ++i)
        if (col.path.points[i].day != first + static_cast<int>(i))
            throw ParseError("relative days must be consecutive", i + 1);
    if (col.path.points.back().day != -first)
        throw ParseError("relative days must run from -W to W", col.path.points.size());
    return col;
}

std::string render_placebo_csv(const PermutationResult& r) {
    std::string out = csv_line({"relative_day", "observed_bp", "placebo_mean_bp", "band90_lo",
                                "band90_hi", "band95_lo", "band95_hi"});
    for (std::size_t i = 0; i < r.observed.points.size(); ++i) {
        const auto& p = r.observed.points[i];
        out += csv_line({std::to_string(p.day), format_number(p.estimate),
                         format_number(r.placebo_mean[i]), format_number(r.band90[i].lo),
                         format_number(r.band90[i].hi), format_number(r.band95[i].lo),
                         format_number(r.band95[i].hi)});
    }
    return out;
}

std::string render_coverage_csv(const std::vector<CoverageRow>& rows) {
    std::string out =
        csv_line({"asset", "group", "horizon", "replications", "coverage90", "coverage95"});
    for (const auto& r : rows)
        out += csv_line({r.asset, r.group, std::to_string(r.horizon),
                         std::to_string(r.coverage.replications),
                         format_number(r.coverage.coverage90), format_number(r.coverage.coverage95)});
    return out;
}

}  // namespace evstudy
