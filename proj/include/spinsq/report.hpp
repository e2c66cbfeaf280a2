#pragma once

#include "json.hpp"

#include <array>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace spinsq {

inline constexpr const char* kVersion = "0.1.0";

// Fixed 9 significant digits, C locale.
std::string format_number(double x);

struct Table {
    std::string name;  // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(const std::vector<double>& values);
    void add_cells(std::vector<std::string> cells);
    // column lookup for tests and summaries
    std::size_t column(const std::string& c) const;
    double value(std::size_t row, const std::string& c) const;
};

// FNV-1a 64 of the compact JSON dump, hex encoded.
std::string manifest_hash(const nlohmann::json& manifest);

void write_csv(std::ostream& os, const Table& t, const std::string& hash);
// Two-column gnuplot data: x column followed by one y column.
void write_dat(std::ostream& os, const Table& t, const std::string& x, const std::string& y);

struct Artifacts {
    nlohmann::json manifest;
    std::vector<Table> tables;
    // (table, x, y) triples emitted as .dat files
    std::vector<std::array<std::string, 3>> plots;
    std::vector<std::string> warnings;
};

// Writes manifest.json, <name>.csv and <name>_<y>.dat into dir.
std::vector<std::filesystem::path> write_artifacts(const std::filesystem::path& dir, const Artifacts& a);

}  // namespace spinsq
