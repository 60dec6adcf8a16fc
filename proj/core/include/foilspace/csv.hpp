#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <string>
#include <vector>

namespace foilspace::csv {

// Rows of numbers with a header. Lines starting with '#' are metadata comments
// and are returned separately; they never count as data.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> comments;
    // 1-based source line of each row, for error messages.
    std::vector<long> lines;
};

// Strict reader: every data row must have exactly header.size() numeric fields.
Table read(const std::filesystem::path& path);
Table parse(std::istream& in, const std::string& source_name = "<stream>");

// Format a double with `digits` significant digits (shortest %g form).
std::string format(double value, int digits = 17);

void write_row(std::ostream& out, const std::vector<double>& row, int digits = 17);
void write_header(std::ostream& out, const std::vector<std::string>& header);

// Opens a file for writing with LF line endings; throws IoError on failure.
std::ofstream open_for_write(const std::filesystem::path& path);

}  // namespace foilspace::csv
