#include "foilspace/csv.hpp"

#include "foilspace/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace foilspace::csv {
namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

Table parse(std::istream& in, const std::string& source_name) {
    Table table;
    std::string line;
    long lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '#') {
            table.comments.push_back(t);
            continue;
        }
        auto fields = split(t);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw ParseError(source_name + ":" + std::to_string(lineno) + ": expected " +
                                 std::to_string(table.header.size()) + " fields, found " +
                                 std::to_string(fields.size()),
                             lineno);
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& field : fields) {
            double value = 0.0;
            const char* first = field.data();
            const char* last = field.data() + field.size();
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc{} || ptr != last) {
                throw ParseError(source_name + ":" + std::to_string(lineno) + ": not a number: '" + field + "'",
                                 lineno);
            }
            row.push_back(value);
        }
        table.rows.push_back(std::move(row));
        table.lines.push_back(lineno);
    }
    if (!have_header) throw ParseError(source_name + ": missing header", 0);
    return table;
}

Table read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return parse(in, path.string());
}

std::string format(double value, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

void write_row(std::ostream& out, const std::vector<double>& row, int digits) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << format(row[i], digits);
    }
    out << '\n';
}

void write_header(std::ostream& out, const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace foilspace::csv
