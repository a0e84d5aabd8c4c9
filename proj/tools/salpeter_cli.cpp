#include <CLI11.hpp>
#include <json.hpp>

#include <salpeter/salpeter.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_config = 2;

void print_warnings(const salpeter::Diagnostics& diag)
{
    for (const auto& w : diag.warnings) std::cerr << "warning: " << w << '\n';
    if (diag.count() > 0) std::cerr << diag.count() << " warning(s)\n";
}

int run_command(const std::string& config_path, const std::string& out_override, const std::string& format)
{
    salpeter::ScenarioConfig cfg = salpeter::load_config(config_path);
    if (!out_override.empty()) cfg.output_path = out_override;
    if (!format.empty()) cfg.format = format;
    const salpeter::RunResult result = salpeter::run(cfg);
    print_warnings(result.diagnostics);
    for (const auto& path : salpeter::write_outputs(cfg, result)) std::cout << path << '\n';
    return exit_ok;
}

salpeter::FigureParams parse_params(const std::vector<std::string>& items)
{
    salpeter::FigureParams params;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw salpeter::ConfigError("--param expects key=value, got '" + item + "'", item);
        const std::string key = item.substr(0, eq), text = item.substr(eq + 1);
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != text.size())
            throw salpeter::ConfigError("--param " + key + ": '" + text + "' is not a number", key);
        params[key] = value;
    }
    return params;
}

int figure_command(int n, const std::string& out, const std::vector<std::string>& items, const std::string& format)
{
    salpeter::Diagnostics diag;
    const salpeter::Table table = salpeter::figure(n, parse_params(items), &diag);
    print_warnings(diag);
    const auto fmt = format == "json" ? salpeter::Format::json : salpeter::Format::csv;
    if (out.empty() || out == "-") {
        if (fmt == salpeter::Format::json)
            salpeter::write_json(std::cout, table);
        else
            salpeter::write_csv(std::cout, table);
    } else {
        salpeter::write_table(out, table, fmt);
        std::cout << out << '\n';
    }
    return exit_ok;
}

int validate_command(const std::string& suite, bool json, bool inject_fault, const std::string& fixtures)
{
    salpeter::ValidationOptions options;
    options.suite = suite == "full" ? salpeter::Suite::full : salpeter::Suite::fast;
    options.flip_current_weight = inject_fault;
    options.fixture_dir = fixtures;
    const salpeter::ValidationReport report = salpeter::validate(options);

    if (json) {
        nlohmann::ordered_json j;
        j["suite"] = suite;
        j["passed"] = report.passed();
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : report.checks)
            j["checks"].push_back({{"criterion", c.criterion},
                                   {"name", c.name},
                                   {"measured", c.measured},
                                   {"tolerance", c.tolerance},
                                   {"bound", c.lower_bound ? "min" : "max"},
                                   {"passed", c.passed}});
        std::cout << j.dump(1) << '\n';
    } else {
        for (const auto& c : report.checks)
            std::printf("%-4s [%2d] %-70s %12.4g %s %.4g\n", c.passed ? "ok" : "FAIL", c.criterion, c.name.c_str(),
                        c.measured, c.lower_bound ? ">=" : "<=", c.tolerance);
        std::printf("%s: %zu checks\n", report.passed() ? "PASS" : "FAIL", report.checks.size());
    }
    return report.passed() ? exit_ok : exit_failed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Wave-packet laboratory for the spinless Salpeter equation"};
    app.require_subcommand(1);

    std::string config_path, run_out, run_format;
    auto* run = app.add_subcommand("run", "Run the scenario described by a config file");
    run->add_option("config", config_path, "Scenario config (key = value)")->required();
    run->add_option("--out", run_out, "Override output.path");
    run->add_option("--format", run_format, "Override output.format")->check(CLI::IsMember({"csv", "json"}));

    int figure_n = 0;
    std::string figure_out, figure_format = "csv";
    std::vector<std::string> figure_params;
    auto* fig = app.add_subcommand("figure", "Emit the lattice data behind figure n");
    fig->add_option("n", figure_n, "Figure number, 1..10")->required();
    fig->add_option("--out", figure_out, "Output file (default: stdout)");
    fig->add_option("--param", figure_params, "Override a parameter, key=value")->take_all();
    fig->add_option("--format", figure_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    std::string suite = "fast", fixtures;
    bool json = false, inject = false;
    auto* val = app.add_subcommand("validate", "Run the acceptance checks");
    val->add_option("--suite", suite, "fast or full")->check(CLI::IsMember({"fast", "full"}));
    val->add_flag("--json", json, "Print the report as JSON");
    val->add_option("--fixtures", fixtures, "Directory of special-function reference tables");
    val->add_flag("--inject-fault", inject, "Flip the sign of the current weight (self-test)")->group("");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        if (*run) return run_command(config_path, run_out, run_format);
        if (*fig) return figure_command(figure_n, figure_out, figure_params, figure_format);
        if (*val) return validate_command(suite, json, inject, fixtures);
    } catch (const salpeter::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failed;
    }
    return exit_ok;
}
