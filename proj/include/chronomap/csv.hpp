#pragma once

#include <string>
#include <vector>

namespace chronomap::csv {

using Row = std::vector<std::string>;

// Reads a whole CSV file into rows. Fields may be double-quoted, with ""
// as the embedded-quote escape; CRLF line ends are accepted.
std::vector<Row> read_file(const std::string& path);

// Quotes a field only when it contains a comma, quote or newline.
std::string escape(const std::string& field);

std::string join_row(const Row& row);

// Writes rows with '\n' line ends, one trailing newline, binary mode.
void write_file(const std::string& path, const std::vector<Row>& rows);

// Shortest representation that round-trips a double exactly.
std::string format_double(double v);

// Fixed decimal places, for display-grade output.
std::string format_double(double v, int precision);

}  // namespace chronomap::csv
