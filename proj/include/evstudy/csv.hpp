#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace evstudy {

/// A parsed CSV document. Every row has the header's arity.
struct RawTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of the column named `name`, if present (exact match after
    /// trimming surrounding whitespace).
    std::optional<std::size_t> column(std::string_view name) const;
};

/// RFC 4180 style reader: comma separated, double-quoted fields may contain
/// commas, quotes ("") and newlines. Accepts LF or CRLF. A trailing newline
/// does not produce an empty row; blank lines are skipped. Throws ParseError
/// on a row whose arity differs from the header or on an unterminated quote.
RawTable read_csv(std::string_view text);

/// Quotes the field if it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view field);

std::string csv_line(const std::vector<std::string>& fields);

/// Shortest text that parses back to the same double.
std::string format_number(double value);

/// Strict double parser: the whole (trimmed) text must be consumed.
std::optional<double> parse_number(std::string_view text);

std::string_view trim(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace evstudy
