#include "ivlab/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ivlab/error.hpp"

namespace ivlab::csv {

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

Table parse(std::string_view text, const std::string& source_name) {
    Table table;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') {
            if (end == text.size()) break;
            continue;
        }
        if (!have_header) {
            table.header = split(line);
            have_header = true;
        } else {
            Row row{line_no, split(line)};
            if (row.fields.size() != table.header.size()) {
                throw Error(ErrorKind::schema, source_name + ": line " + std::to_string(line_no) +
                                                   ": expected " +
                                                   std::to_string(table.header.size()) +
                                                   " fields, got " +
                                                   std::to_string(row.fields.size()));
            }
            table.rows.push_back(std::move(row));
        }
        if (end == text.size()) break;
    }
    if (!have_header) throw Error(ErrorKind::schema, source_name + ": missing header row");
    return table;
}

Table read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::missing_file, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

void require_header(const Table& table, const std::vector<std::string>& expected,
                    const std::string& source_name) {
    if (table.header != expected) {
        std::string want;
        for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
        throw Error(ErrorKind::schema, source_name + ": header must be '" + want + "'");
    }
}

double parse_double(std::string_view field, std::size_t line, const std::string& what) {
    double v = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (field.empty() || ec != std::errc{} || ptr != last) {
        throw Error(ErrorKind::schema, "line " + std::to_string(line) + ": bad number '" +
                                           std::string(field) + "' in " + what);
    }
    if (!std::isfinite(v)) {
        throw Error(ErrorKind::schema,
                    "line " + std::to_string(line) + ": non-finite value in " + what);
    }
    return v;
}

long long parse_int(std::string_view field, std::size_t line, const std::string& what) {
    long long v = 0;
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), last, v);
    if (field.empty() || ec != std::errc{} || ptr != last) {
        throw Error(ErrorKind::schema, "line " + std::to_string(line) + ": bad integer '" +
                                           std::string(field) + "' in " + what);
    }
    return v;
}

std::string shortest(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::string fixed(double value, int decimals) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::missing_file, "cannot write " + path.string());
    out << text;
}

}  // namespace ivlab::csv
