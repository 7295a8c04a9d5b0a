#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "netml/error.hpp"

namespace netml::csv {

// Splits one physical line. Handles double-quoted fields with embedded
// commas and doubled quotes; trailing CR from CRLF files is stripped.
inline std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else if (ch != '\r') {
            cell.push_back(ch);
        }
    }
    cells.push_back(std::move(cell));
    return cells;
}

struct File {
    std::vector<std::string> header;  // empty when the file has none
    std::vector<std::vector<std::string>> rows;
};

inline File read_file(const std::filesystem::path& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw MissingFile("cannot open '" + path.string() + "'");

    File out;
    std::string line;
    std::size_t line_no = 0;
    std::size_t expected = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        auto cells = split_line(line);
        if (line_no == 1 && has_header) {
            out.header = std::move(cells);
            expected = out.header.size();
            continue;
        }
        if (expected == 0) expected = cells.size();
        if (cells.size() != expected) {
            throw MalformedRow(path.string() + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(expected) + " cells, got " +
                               std::to_string(cells.size()));
        }
        out.rows.push_back(std::move(cells));
    }
    return out;
}

// Full-cell numeric parse; rejects partial matches like "12abc".
inline std::optional<double> parse_number(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    return value;
}

inline std::string quote(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char ch : cell) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out += "\"";
    return out;
}

// Fixed-precision formatting keeps emitted reports byte-stable across runs.
inline std::string format_double(double value, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
    return buf;
}

}  // namespace netml::csv
