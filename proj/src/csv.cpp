#include "cellstress/csv.hpp"

#include "cellstress/errors.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace cellstress::csv {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

namespace {

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out += ',';
        out += fields[i];
    }
    return out;
}

bool read_line(std::ifstream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

}  // namespace

Reader::Reader(const std::string& path, const std::vector<std::string>& expected_header)
    : in_(path), columns_(expected_header.size()) {
    if (!in_) throw Error("cannot open file: " + path);
    std::string line;
    if (!read_line(in_, line)) {
        throw MalformedRowError(1, "missing header row, expected: " + join(expected_header));
    }
    ++line_;
    if (split_fields(line) != expected_header) {
        throw MalformedRowError(1, "bad header '" + line + "', expected: " + join(expected_header));
    }
}

bool Reader::next(std::vector<std::string>& fields) {
    std::string line;
    while (read_line(in_, line)) {
        ++line_;
        if (line.empty()) continue;  // tolerate blank lines, common at EOF
        fields = split_fields(line);
        if (fields.size() != columns_) {
            throw MalformedRowError(line_, "expected " + std::to_string(columns_) +
                                               " columns, got " + std::to_string(fields.size()));
        }
        return true;
    }
    return false;
}

std::string format_number(double value) {
    if (std::isfinite(value) && value == std::floor(value) && std::abs(value) < 1e15) {
        long long as_int = static_cast<long long>(value);
        return std::to_string(as_int);
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_number(const std::string& text, std::size_t line, const std::string& column) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last || text.empty()) {
        throw MalformedRowError(line, "bad number in column '" + column + "': '" + text + "'");
    }
    return value;
}

long long parse_integer(const std::string& text, std::size_t line, const std::string& column) {
    long long value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last || text.empty()) {
        throw MalformedRowError(line, "bad integer in column '" + column + "': '" + text + "'");
    }
    return value;
}

}  // namespace cellstress::csv
