#pragma once

#include <cstddef>
#include <fstream>
#include <string>
#include <vector>

namespace cellstress::csv {

// Minimal comma-separated reader: UTF-8, no quoting, mandatory header row.
// Good enough for the flat id/number tables this project consumes.
class Reader {
public:
    Reader(const std::string& path, const std::vector<std::string>& expected_header);

    // Reads the next data row into `fields`. Returns false at end of file.
    // Throws MalformedRowError when the column count is wrong.
    bool next(std::vector<std::string>& fields);

    std::size_t line() const { return line_; }

private:
    std::ifstream in_;
    std::size_t line_ = 0;
    std::size_t columns_ = 0;
};

std::vector<std::string> split_fields(const std::string& line);

// Shortest round-trip formatting; integral values print without a decimal point.
std::string format_number(double value);

double parse_number(const std::string& text, std::size_t line, const std::string& column);
long long parse_integer(const std::string& text, std::size_t line, const std::string& column);

}  // namespace cellstress::csv
