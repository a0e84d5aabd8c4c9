#include <gtest/gtest.h>

#include <salpeter/salpeter.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <sys/wait.h>

using namespace salpeter;
namespace fs = std::filesystem;

namespace {

ScenarioConfig parse(const std::string& text)
{
    std::istringstream is(text);
    return parse_config(is);
}

// Parses `text` expecting a ConfigError; returns it for inspection.
ConfigError config_error(const std::string& text)
{
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e;
    }
    ADD_FAILURE() << "no ConfigError for:\n" << text;
    return ConfigError("", "");
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "salpeter_cli_test";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p)
{
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

int cli(const std::string& args, const std::string& env = "")
{
    const std::string cmd = env + " \"" SALPETER_CLI_PATH "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Config, ParsesShippedConfigs)
{
    int seen = 0;
    for (const auto& entry : fs::directory_iterator(SALPETER_CONFIG_DIR)) {
        if (entry.path().extension() != ".cfg") continue;
        EXPECT_NO_THROW(load_config(entry.path().string())) << entry.path();
        ++seen;
    }
    EXPECT_GE(seen, 7);
}

TEST(Config, ReadsValuesAndDefaults)
{
    const auto cfg = parse("# comment\nscenario = free_massive\nparams.a = 2 # trailing\n"
                           "time.values = 0, 0.5, 3\ngrid.N = 1024\ngrid.L = 100\n");
    EXPECT_EQ(cfg.scenario, Scenario::free_massive);
    EXPECT_EQ(cfg.constants.m, 0.5);
    EXPECT_EQ(cfg.a, 2.0);
    EXPECT_EQ(cfg.times, (std::vector<double>{0.0, 0.5, 3.0}));
    EXPECT_EQ(cfg.n, 1024u);
    EXPECT_EQ(cfg.x0, -50.0);
    EXPECT_TRUE(cfg.wants("rho"));
    EXPECT_FALSE(cfg.wants("continuity"));
}

TEST(Config, ErrorsNameFieldAndLine)
{
    auto e = config_error("scenario = linear_potential\n\nparams.lambda = -1\n");
    EXPECT_EQ(e.field(), "params.lambda");
    EXPECT_EQ(e.line(), 3);

    e = config_error("scenario = plane_wave\nparams.kk = 3\n");
    EXPECT_EQ(e.field(), "params.kk");
    EXPECT_EQ(e.line(), 2);

    EXPECT_EQ(config_error("scenario = plane_wave\nparams.k = 3\nparams.k = 4\n").line(), 3);
    EXPECT_EQ(config_error("scenario = plane_wave\nparams.k = three\n").field(), "params.k");
    EXPECT_EQ(config_error("scenario = plane_wave\nparams.k = 3x\n").field(), "params.k");
    EXPECT_EQ(config_error("scenario = warp_drive\n").field(), "scenario");
    EXPECT_EQ(config_error("params.a = 1\n").field(), "scenario");
    EXPECT_EQ(config_error("scenario = plane_wave\njust text\n").line(), 2);
    EXPECT_EQ(config_error("scenario = plane_wave\ngrid.N = 1000\n").field(), "grid.N");
    EXPECT_EQ(config_error("scenario = plane_wave\ntime.values = 0, 2, 1\n").field(), "time.values");
    EXPECT_EQ(config_error("scenario = free_massive\nconstants.m = 0\n").field(), "constants.m");
    EXPECT_EQ(config_error("scenario = free_massless_movers\nconstants.m = 1\n").field(), "constants.m");
    EXPECT_EQ(config_error("scenario = plane_wave\noutput.fields = rho, entropy\n").field(), "output.fields");
    EXPECT_EQ(config_error("scenario = plane_wave\noutput.format = xml\n").field(), "output.format");
    EXPECT_EQ(config_error("scenario = custom\npotential.kind = sampled\n").field(), "potential.kind");
    EXPECT_EQ(config_error("scenario = custom\ntime.values = -1, 0\n").field(), "time.values");
    EXPECT_THROW(load_config("/nonexistent/salpeter.cfg"), ConfigError);
}

TEST(Io, CsvRoundTripIsBitExact)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
    std::uniform_int_distribution<int> exponent(-300, 300);
    Table t;
    t.meta = {{"quantity", "test"}, {"units", "x [m], rho [1/m]"}};
    t.add_column("a");
    t.add_column("b");
    for (int i = 0; i < 500; ++i) t.add_row({std::ldexp(mantissa(rng), exponent(rng)), mantissa(rng) / 3.0});
    t.add_row({0.0, -0.0});
    t.add_row({std::numeric_limits<double>::denorm_min(), std::numeric_limits<double>::max()});

    std::stringstream csv;
    write_csv(csv, t);
    const Table back = read_csv(csv);
    EXPECT_EQ(back.header, t.header);
    EXPECT_EQ(back.meta, t.meta);
    ASSERT_EQ(back.rows(), t.rows());
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        for (std::size_t r = 0; r < t.rows(); ++r) EXPECT_EQ(back.columns[c][r], t.columns[c][r]);

    std::stringstream json;
    write_json(json, t);
    const Table mirror = read_json(json);
    EXPECT_EQ(mirror.header, t.header);
    EXPECT_EQ(mirror.meta, t.meta);
    EXPECT_EQ(mirror.columns, t.columns);
}

TEST(Io, SeventeenSignificantDigits)
{
    EXPECT_EQ(format_exact(0.1), "0.10000000000000001");
    EXPECT_EQ(format_exact(1.0), "1");
    EXPECT_EQ(std::stod(format_exact(2.0 / 3.0)), 2.0 / 3.0);
}

TEST(Scenario, SummaryPathSitsBesideOutput)
{
    EXPECT_EQ(summary_path("out/run.csv"), "out/run_summary.csv");
    EXPECT_EQ(summary_path("run.json"), "run_summary.json");
}

TEST(Scenario, PlaneWaveCurrentIsThreeFifths)
{
    const auto cfg = load_config(std::string(SALPETER_CONFIG_DIR) + "/plane_wave.cfg");
    const auto result = run(cfg);
    EXPECT_EQ(result.diagnostics.count(), 1u);
    for (double j : result.fields.column("j_exact")) EXPECT_NEAR(j, 0.6, 1e-15);
    for (double j : result.fields.column("j_num")) EXPECT_NEAR(j, 0.6, 1e-10);
    for (double rho : result.fields.column("rho_num")) EXPECT_NEAR(rho, 1.0, 1e-10);
}

TEST(Scenario, LorentzianMatchesClosedForm)
{
    const auto cfg = parse("scenario = free_massless_lorentzian\ngrid.N = 2048\ngrid.L = 200\n"
                           "time.values = 0, 1.5\noutput.fields = rho, j, norm, mean_v\n");
    const auto result = run(cfg);
    for (double e : result.summary.column("rho_error_max")) EXPECT_LE(e, 1e-10);
    // The |p| kink of the profile puts the ladder norm O(dp^2) above 1; it must not drift.
    const auto& norms = result.summary.column("norm");
    const double dp = 2.0 * std::numbers::pi / 200.0;
    EXPECT_NEAR(norms.front(), 1.0, dp * dp);
    EXPECT_NEAR(norms.back(), norms.front(), 1e-12);
    for (double v : result.summary.column("mean_v")) EXPECT_NEAR(v, 0.0, 1e-12);
    EXPECT_EQ(result.fields.rows(), 2u * 2048u);
    EXPECT_EQ(result.fields.meta_value("scenario"), "free_massless_lorentzian");
}

TEST(Scenario, RunsAreDeterministic)
{
    const auto cfg = parse("scenario = free_massive\ngrid.N = 1024\ngrid.L = 200\ntime.values = 0, 2\n");
    const auto first = run(cfg), second = run(cfg);
    EXPECT_EQ(first.fields.columns, second.fields.columns);
    EXPECT_EQ(first.summary.columns, second.summary.columns);
}

TEST(Figures, AllTenProduceLabelledData)
{
    for (int n = 1; n <= 10; ++n) {
        Diagnostics diag;
        FigureParams small;
        if (n != 7) small = {{"nt", 3}};
        const Table t = figure(n, small, &diag);
        EXPECT_GT(t.rows(), 0u) << n;
        EXPECT_FALSE(t.meta_value("units").empty()) << n;
        for (const auto& col : t.columns)
            for (double v : col) EXPECT_TRUE(std::isfinite(v)) << n;
    }
}

TEST(Figures, RejectsBadRequests)
{
    EXPECT_THROW(figure(0), ConfigError);
    EXPECT_THROW(figure(11), ConfigError);
    EXPECT_THROW(figure(1, {{"lambda", 1.0}}), ConfigError);
    EXPECT_THROW(figure(6, {{"mu", -1.0}}), ConfigError);
}

TEST(Figures, OverridesApply)
{
    const Table t = figure(1, {{"nx", 5}, {"nt", 2}, {"x_min", -1}, {"x_max", 1}});
    EXPECT_EQ(t.rows(), 10u);
    EXPECT_EQ(t.column("x").front(), -1.0);
    EXPECT_EQ(t.column("x").back(), 1.0);
}

TEST(Cli, ExitCodes)
{
    const fs::path bad = scratch("bad.cfg");
    std::ofstream(bad) << "scenario = linear_potential\nparams.lambda = -1\n";
    EXPECT_EQ(cli("run \"" + bad.string() + "\""), 2);
    EXPECT_EQ(cli("run /nonexistent/salpeter.cfg"), 2);
    EXPECT_EQ(cli("launch"), 2);
    EXPECT_EQ(cli("figure 42"), 2);
    EXPECT_EQ(cli("figure 1 --param nope=1"), 2);
    EXPECT_EQ(cli("figure 1 --param a=abc"), 2);
    EXPECT_EQ(cli("validate --suite medium"), 2);
    EXPECT_EQ(cli("--help"), 0);
}

TEST(Cli, RunWritesCsvAndJsonMirror)
{
    const fs::path csv = scratch("pw.csv"), json = scratch("pw.json");
    const std::string cfg = std::string(SALPETER_CONFIG_DIR) + "/plane_wave.cfg";
    ASSERT_EQ(cli("run \"" + cfg + "\" --out \"" + csv.string() + "\""), 0);
    ASSERT_EQ(cli("run \"" + cfg + "\" --out \"" + json.string() + "\" --format json"), 0);
    const Table a = read_csv(csv.string());
    std::ifstream js(json);
    const Table b = read_json(js);
    EXPECT_EQ(a.header, b.header);
    EXPECT_EQ(a.columns, b.columns);
    EXPECT_TRUE(fs::exists(summary_path(csv.string())));
    EXPECT_TRUE(fs::exists(summary_path(json.string())));
}

TEST(Cli, OutputIndependentOfThreadCount)
{
    const fs::path one = scratch("fig5_1.csv"), many = scratch("fig5_4.csv");
    ASSERT_EQ(cli("figure 5 --param nt=3 --out \"" + one.string() + "\"", "SALPETER_THREADS=1"), 0);
    ASSERT_EQ(cli("figure 5 --param nt=3 --out \"" + many.string() + "\"", "SALPETER_THREADS=4"), 0);
    EXPECT_EQ(slurp(one), slurp(many));
}

TEST(Cli, InjectedFaultFailsValidation)
{
    EXPECT_EQ(cli("validate --inject-fault"), 1);
}
