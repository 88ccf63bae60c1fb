#pragma once

/// @file io.hpp
/// @brief CSV formatting and atomic file output.

#include "normsol/error.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace normsol {

/// Shortest round-trip-safe text for a double (17 significant digits).
inline std::string format_double(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

/// Column-major table with a header row, comma separated.
inline std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& columns)
{
    require(header.size() == columns.size() && !columns.empty(), "csv header and columns disagree");
    const std::size_t rows = columns.front().size();
    for (const auto& c : columns)
        require(c.size() == rows, "csv columns have different lengths");
    std::string out;
    for (std::size_t j = 0; j < header.size(); ++j)
        out += (j ? "," : "") + header[j];
    out += '\n';
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            if (j)
                out += ',';
            out += format_double(columns[j][i]);
        }
        out += '\n';
    }
    return out;
}

/// Parse a table written by csv_table.
inline std::vector<std::vector<double>> read_csv_columns(const std::string& path, std::vector<std::string>* header = nullptr)
{
    std::ifstream in(path);
    require(in.good(), "cannot open " + path);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> names;
    for (std::size_t pos = 0;;) {
        const auto next = line.find(',', pos);
        names.push_back(line.substr(pos, next - pos));
        if (next == std::string::npos)
            break;
        pos = next + 1;
    }
    std::vector<std::vector<double>> cols(names.size());
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::size_t pos = 0;
        for (auto& c : cols) {
            std::size_t used = 0;
            c.push_back(std::stod(line.substr(pos), &used));
            pos += used + 1;
        }
    }
    if (header)
        *header = std::move(names);
    return cols;
}

/// Write to a sibling temporary file, then rename over `path`.
inline void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorKind::InvalidArgument, "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw Error(ErrorKind::InvalidArgument, "short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

} // namespace normsol
