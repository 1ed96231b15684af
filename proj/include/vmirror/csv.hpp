#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace vmirror::csv {

using Row = std::vector<std::string>;

/// RFC 4180 reader: quoted fields may contain commas, quotes ("") and line
/// breaks. CRLF and LF record separators are both accepted. A trailing empty
/// line does not produce a row.
std::vector<Row> parse(std::string_view text, char delimiter = ',');

/// Quotes a field when it contains the delimiter, a quote, or a line break.
std::string escape(std::string_view field, char delimiter = ',');

void write_row(std::ostream& out, const Row& row, char delimiter = ',');

std::string read_file(const std::string& path);

/// Column lookup by header name; returns -1 when absent.
int column_index(const Row& header, std::string_view name);

}  // namespace vmirror::csv
