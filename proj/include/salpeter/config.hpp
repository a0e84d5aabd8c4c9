#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "constants.hpp"
#include "errors.hpp"

namespace salpeter {

enum class Scenario {
    free_massless_lorentzian,
    free_massless_movers,
    free_massive,
    linear_potential,
    plane_wave,
    massless_3d,
    custom,
};

inline const std::map<std::string, Scenario>& scenario_names()
{
    static const std::map<std::string, Scenario> names{
        {"free_massless_lorentzian", Scenario::free_massless_lorentzian},
        {"free_massless_movers", Scenario::free_massless_movers},
        {"free_massive", Scenario::free_massive},
        {"linear_potential", Scenario::linear_potential},
        {"plane_wave", Scenario::plane_wave},
        {"massless_3d", Scenario::massless_3d},
        {"custom", Scenario::custom},
    };
    return names;
}

inline std::string to_string(Scenario s)
{
    for (const auto& [name, value] : scenario_names())
        if (value == s) return name;
    return "unknown";
}

enum class PotentialKind { none, linear, sampled };

struct ScenarioConfig {
    Scenario scenario = Scenario::free_massless_lorentzian;
    PhysicalConstants constants;

    double a = 1.0;
    double lambda = 1.0;
    double mu = 1.0;
    double k = 0.0;
    double amplitude = 1.0;

    std::size_t n = 4096;
    double length = 400.0;
    double x0 = -200.0;

    std::vector<double> times{0.0};

    std::set<std::string> fields{"rho", "j"};
    std::string output_path = "salpeter_out.csv";
    std::string format = "csv";

    // custom scenario
    double center = 0.0;
    double width = 1.0;
    double momentum = 0.0;
    PotentialKind potential = PotentialKind::none;
    double slope = 1.0;
    std::string potential_file;
    double dt = 1e-3;

    // massless_3d
    std::size_t radial_n = 20001;
    double r_max = 400.0;

    bool wants(const std::string& field) const { return fields.count(field) != 0; }
};

namespace detail {

inline std::string trim(std::string s)
{
    auto blank = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), blank));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), blank).base(), s.end());
    return s;
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct Entry {
    std::string value;
    int line = 0;
};

class EntryReader {
public:
    explicit EntryReader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string text(const std::string& key, std::string fallback)
    {
        used_.insert(key);
        auto it = entries_.find(key);
        return it == entries_.end() ? fallback : it->second.value;
    }

    double number(const std::string& key, double fallback)
    {
        used_.insert(key);
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        return parse_number(key, it->second);
    }

    std::size_t count(const std::string& key, std::size_t fallback)
    {
        const double v = number(key, double(fallback));
        if (!(v >= 1.0) || v != std::floor(v) || v > 1e12)
            fail(key, "must be a positive integer");
        return std::size_t(v);
    }

    std::vector<double> numbers(const std::string& key, std::vector<double> fallback)
    {
        used_.insert(key);
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        std::vector<double> out;
        for (const auto& item : split_list(it->second.value))
            out.push_back(parse_number(key, Entry{item, it->second.line}));
        if (out.empty()) fail(key, "must list at least one value");
        return out;
    }

    [[noreturn]] void fail(const std::string& key, const std::string& why) const
    {
        auto it = entries_.find(key);
        const int line = it == entries_.end() ? 0 : it->second.line;
        throw ConfigError(location(line) + key + " " + why, key, line);
    }

    void reject_unused() const
    {
        for (const auto& [key, entry] : entries_)
            if (!used_.count(key))
                throw ConfigError(location(entry.line) + "unknown key '" + key + "'", key, entry.line);
    }

    static std::string location(int line) { return line > 0 ? "line " + std::to_string(line) + ": " : ""; }

private:
    double parse_number(const std::string& key, const Entry& e) const
    {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(e.value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || trim(e.value.substr(used)).size() != 0 || !std::isfinite(v))
            throw ConfigError(location(e.line) + key + " = '" + e.value + "' is not a finite number", key, e.line);
        return v;
    }

    std::map<std::string, Entry> entries_;
    std::set<std::string> used_;
};

} // namespace detail

/// Parses flat "key = value" text. '#' starts a comment; keys are dotted
/// (grid.N). Unknown or duplicate keys and invalid values raise ConfigError
/// naming the field and line.
inline ScenarioConfig parse_config(std::istream& is)
{
    std::map<std::string, detail::Entry> entries;
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string content = detail::trim(raw.substr(0, hash));
        if (content.empty()) continue;
        const auto eq = content.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line) + ": expected key = value", "", line);
        const std::string key = detail::trim(content.substr(0, eq));
        const std::string value = detail::trim(content.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key", "", line);
        if (!entries.emplace(key, detail::Entry{value, line}).second)
            throw ConfigError("line " + std::to_string(line) + ": duplicate key '" + key + "'", key, line);
    }

    detail::EntryReader r(std::move(entries));
    ScenarioConfig cfg;

    if (!r.has("scenario")) throw ConfigError("missing required key 'scenario'", "scenario");
    const std::string name = r.text("scenario", "");
    const auto it = scenario_names().find(name);
    if (it == scenario_names().end()) r.fail("scenario", "'" + name + "' is not a known scenario");
    cfg.scenario = it->second;

    cfg.constants.hbar = r.number("constants.hbar", 1.0);
    cfg.constants.c = r.number("constants.c", 1.0);
    const double default_mass = cfg.scenario == Scenario::free_massive ? 0.5 : 0.0;
    cfg.constants.m = r.number("constants.m", default_mass);
    if (!(cfg.constants.hbar > 0.0)) r.fail("constants.hbar", "must be positive");
    if (!(cfg.constants.c > 0.0)) r.fail("constants.c", "must be positive");
    if (!(cfg.constants.m >= 0.0)) r.fail("constants.m", "must be non-negative");

    cfg.a = r.number("params.a", 1.0);
    cfg.lambda = r.number("params.lambda", 1.0);
    cfg.mu = r.number("params.mu", 1.0);
    cfg.k = r.number("params.k", 0.0);
    cfg.amplitude = r.number("params.amplitude", 1.0);
    if (!(cfg.a > 0.0)) r.fail("params.a", "must be positive");
    if (!(cfg.lambda > 0.0)) r.fail("params.lambda", "must be positive");
    if (!(cfg.mu > 0.0)) r.fail("params.mu", "must be positive");
    if (cfg.amplitude == 0.0) r.fail("params.amplitude", "must be non-zero");

    cfg.n = r.count("grid.N", 4096);
    if (cfg.n < 8 || (cfg.n & (cfg.n - 1)) != 0) r.fail("grid.N", "must be a power of two >= 8");
    cfg.length = r.number("grid.L", 400.0);
    if (!(cfg.length > 0.0)) r.fail("grid.L", "must be positive");
    cfg.x0 = r.number("grid.x0", -0.5 * cfg.length);

    cfg.times = r.numbers("time.values", {0.0});
    for (std::size_t i = 1; i < cfg.times.size(); ++i)
        if (!(cfg.times[i] > cfg.times[i - 1])) r.fail("time.values", "must be strictly increasing");

    if (r.has("output.fields")) {
        static const std::set<std::string> known{"rho", "j", "mean_x", "mean_v", "norm", "continuity"};
        cfg.fields.clear();
        for (const auto& f : detail::split_list(r.text("output.fields", ""))) {
            if (!known.count(f)) r.fail("output.fields", "has unknown field '" + f + "'");
            cfg.fields.insert(f);
        }
    }
    cfg.output_path = r.text("output.path", cfg.output_path);
    if (cfg.output_path.empty()) r.fail("output.path", "must not be empty");
    cfg.format = r.text("output.format", cfg.format);
    if (cfg.format != "csv" && cfg.format != "json") r.fail("output.format", "must be csv or json");

    cfg.center = r.number("initial.center", 0.0);
    cfg.width = r.number("initial.width", 1.0);
    cfg.momentum = r.number("initial.momentum", 0.0);
    if (!(cfg.width > 0.0)) r.fail("initial.width", "must be positive");

    const std::string kind = r.text("potential.kind", "none");
    if (kind == "none")
        cfg.potential = PotentialKind::none;
    else if (kind == "linear")
        cfg.potential = PotentialKind::linear;
    else if (kind == "sampled")
        cfg.potential = PotentialKind::sampled;
    else
        r.fail("potential.kind", "must be none, linear or sampled");
    cfg.slope = r.number("potential.mu", 1.0);
    if (!(cfg.slope > 0.0)) r.fail("potential.mu", "must be positive");
    cfg.potential_file = r.text("potential.file", "");
    if (cfg.potential == PotentialKind::sampled && cfg.potential_file.empty())
        r.fail("potential.kind", "sampled requires potential.file");
    cfg.dt = r.number("evolve.dt", 1e-3);
    if (!(cfg.dt > 0.0)) r.fail("evolve.dt", "must be positive");

    cfg.radial_n = r.count("radial.N", 20001);
    if (cfg.radial_n < 2) r.fail("radial.N", "must be at least 2");
    cfg.r_max = r.number("radial.r_max", 400.0);
    if (!(cfg.r_max > 0.0)) r.fail("radial.r_max", "must be positive");

    r.reject_unused();

    // Scenario-specific rules.
    const bool natural = cfg.constants.hbar == 1.0 && cfg.constants.c == 1.0;
    switch (cfg.scenario) {
    case Scenario::free_massless_lorentzian:
    case Scenario::free_massless_movers:
    case Scenario::linear_potential:
    case Scenario::massless_3d:
        if (cfg.constants.m != 0.0) r.fail("constants.m", "must be 0 for scenario " + name);
        if (!natural) r.fail("constants.hbar", "scenario " + name + " is defined in natural units (hbar = c = 1)");
        break;
    case Scenario::free_massive:
        if (!(cfg.constants.m > 0.0)) r.fail("constants.m", "must be positive for scenario free_massive");
        break;
    case Scenario::plane_wave:
    case Scenario::custom:
        break;
    }
    // Split-step scenarios integrate forward from t = 0.
    if (cfg.scenario == Scenario::linear_potential || cfg.scenario == Scenario::custom) {
        for (double t : cfg.times)
            if (t < 0.0) r.fail("time.values", "must be non-negative for scenario " + name);
    }
    return cfg;
}

inline ScenarioConfig load_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file '" + path + "'", "path");
    return parse_config(is);
}

} // namespace salpeter
