#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cganopt::csv {

// Shortest text that round-trips a double exactly.
std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);

class Writer {
public:
    Writer(const std::filesystem::path& path, const std::vector<std::string>& header);

    Writer& cell(std::string_view text);
    Writer& cell(double v) { return cell(format_double(v)); }
    Writer& cell(int v) { return cell(std::to_string(v)); }
    Writer& cell(long long v) { return cell(std::to_string(v)); }
    Writer& cell(std::size_t v) { return cell(std::to_string(v)); }
    void end_row();

private:
    std::ofstream out_;
    bool row_started_ = false;
};

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Throws std::runtime_error when the column is absent.
    std::size_t column(std::string_view name) const;
};

// Throws std::runtime_error on unreadable files or ragged rows.
Table read(const std::filesystem::path& path);

double parse_double(const std::string& s);
int parse_int(const std::string& s);

}  // namespace cganopt::csv
