#include "spinsq/report.hpp"

#include "spinsq/common.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace spinsq {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 9);
    return std::string(buf, r.ptr);
}

void Table::add(const std::vector<double>& values) {
    std::vector<std::string> cells;
    for (double v : values) cells.push_back(format_number(v));
    add_cells(std::move(cells));
}

void Table::add_cells(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw std::logic_error("table " + name + ": row has " + std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(columns.size()));
    rows.push_back(std::move(cells));
}

std::size_t Table::column(const std::string& c) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == c) return i;
    throw std::out_of_range("table " + name + " has no column " + c);
}

double Table::value(std::size_t row, const std::string& c) const {
    return std::stod(rows.at(row).at(column(c)));
}

std::string manifest_hash(const nlohmann::json& manifest) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : manifest.dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_csv(std::ostream& os, const Table& t, const std::string& hash) {
    os << "# spinsq " << kVersion << '\n' << "# manifest " << hash << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << '\n';
    }
}

void write_dat(std::ostream& os, const Table& t, const std::string& x, const std::string& y) {
    const std::size_t ix = t.column(x), iy = t.column(y);
    os << "# " << x << ' ' << y << '\n';
    for (const auto& r : t.rows) os << r[ix] << ' ' << r[iy] << '\n';
}

std::vector<std::filesystem::path> write_artifacts(const std::filesystem::path& dir, const Artifacts& a) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> out;
    const std::string hash = manifest_hash(a.manifest);
    auto open = [&](const std::filesystem::path& p) {
        std::ofstream f(p, std::ios::binary);
        if (!f) throw ConfigError("cannot write " + p.string());
        out.push_back(p);
        return f;
    };
    {
        auto f = open(dir / "manifest.json");
        f << a.manifest.dump(2) << '\n';
    }
    for (const Table& t : a.tables) {
        auto f = open(dir / (t.name + ".csv"));
        write_csv(f, t, hash);
    }
    for (const auto& [tn, x, y] : a.plots) {
        for (const Table& t : a.tables) {
            if (t.name != tn) continue;
            auto f = open(dir / (t.name + "_" + y + ".dat"));
            write_dat(f, t, x, y);
        }
    }
    return out;
}

}  // namespace spinsq
