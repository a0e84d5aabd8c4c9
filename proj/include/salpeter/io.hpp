#pragma once

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace salpeter {

/// Column-major numeric table with ordered "key: value" metadata.
struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().size(); }

    std::size_t add_column(std::string name, std::vector<double> values = {})
    {
        header.push_back(std::move(name));
        columns.push_back(std::move(values));
        return columns.size() - 1;
    }

    void add_row(std::initializer_list<double> values)
    {
        if (values.size() != columns.size()) throw std::invalid_argument("Table: row width mismatch");
        std::size_t c = 0;
        for (double v : values) columns[c++].push_back(v);
    }

    const std::vector<double>& column(const std::string& name) const
    {
        for (std::size_t c = 0; c < header.size(); ++c)
            if (header[c] == name) return columns[c];
        throw std::out_of_range("Table: no column '" + name + "'");
    }

    std::string meta_value(const std::string& key) const
    {
        for (const auto& [k, v] : meta)
            if (k == key) return v;
        return {};
    }
};

/// Shortest text that reads back to the same double (17 significant digits).
inline std::string format_exact(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const Table& t)
{
    for (const auto& [k, v] : t.meta) os << "# " << k << ": " << v << '\n';
    for (std::size_t c = 0; c < t.header.size(); ++c) os << (c ? "," : "") << t.header[c];
    os << '\n';
    for (std::size_t r = 0; r < t.rows(); ++r) {
        for (std::size_t c = 0; c < t.columns.size(); ++c)
            os << (c ? "," : "") << format_exact(t.columns[c][r]);
        os << '\n';
    }
}

inline nlohmann::ordered_json to_json(const Table& t)
{
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.meta) meta[k] = v;
    nlohmann::ordered_json cols = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < t.header.size(); ++c) cols[t.header[c]] = t.columns[c];
    return {{"meta", meta}, {"columns", cols}};
}

inline void write_json(std::ostream& os, const Table& t) { os << to_json(t).dump(1) << '\n'; }

enum class Format { csv, json };

inline void write_table(const std::string& path, const Table& t, Format format)
{
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    if (format == Format::json)
        write_json(os, t);
    else
        write_csv(os, t);
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

inline Table read_csv(std::istream& is)
{
    Table t;
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            const auto colon = line.find(": ");
            if (colon != std::string::npos)
                t.meta.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!have_header) {
            for (auto& c : cells) t.add_column(c);
            have_header = true;
            continue;
        }
        if (cells.size() != t.columns.size()) throw std::runtime_error("read_csv: ragged row: " + line);
        for (std::size_t c = 0; c < cells.size(); ++c) {
            char* end = nullptr;
            const double v = std::strtod(cells[c].c_str(), &end);
            if (end == cells[c].c_str()) throw std::runtime_error("read_csv: not a number: " + cells[c]);
            t.columns[c].push_back(v);
        }
    }
    return t;
}

inline Table read_csv(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    return read_csv(is);
}

inline Table read_json(std::istream& is)
{
    const auto j = nlohmann::ordered_json::parse(is);
    Table t;
    for (const auto& [k, v] : j.at("meta").items()) t.meta.emplace_back(k, v.get<std::string>());
    for (const auto& [k, v] : j.at("columns").items()) t.add_column(k, v.get<std::vector<double>>());
    return t;
}

} // namespace salpeter
