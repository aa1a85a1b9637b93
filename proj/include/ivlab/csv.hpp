#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ivlab::csv {

struct Row {
    std::size_t line = 0;  // 1-based line number in the source file
    std::vector<std::string> fields;
};

/// Comma-separated table with a mandatory header. Blank lines and lines
/// starting with '#' are skipped; CRLF line endings are accepted.
struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;
};

Table read(const std::filesystem::path& path);
Table parse(std::string_view text, const std::string& source_name);

/// Throws a schema error unless the header equals `expected` exactly.
void require_header(const Table& table, const std::vector<std::string>& expected,
                    const std::string& source_name);

std::vector<std::string> split(std::string_view line, char sep = ',');

double parse_double(std::string_view field, std::size_t line, const std::string& what);
long long parse_int(std::string_view field, std::size_t line, const std::string& what);

/// Shortest decimal text that round-trips to the same double.
std::string shortest(double value);
/// Fixed-point with `decimals` places ("nan" for NaN).
std::string fixed(double value, int decimals);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace ivlab::csv
