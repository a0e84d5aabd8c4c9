#pragma once

#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "config.hpp"
#include "diagnostics.hpp"
#include "evolve.hpp"
#include "exact.hpp"
#include "grid.hpp"
#include "io.hpp"
#include "observables.hpp"

namespace salpeter {

struct RunResult {
    Table fields;
    Table summary;
    Diagnostics diagnostics;
};

namespace detail {

inline std::string format_list(const std::vector<double>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_exact(v[i]);
    return s;
}

inline void describe(Table& t, const ScenarioConfig& cfg, double length)
{
    t.meta = {
        {"scenario", to_string(cfg.scenario)},
        {"hbar", format_exact(cfg.constants.hbar)},
        {"c", format_exact(cfg.constants.c)},
        {"m", format_exact(cfg.constants.m)},
    };
    switch (cfg.scenario) {
    case Scenario::free_massless_lorentzian:
    case Scenario::free_massless_movers:
    case Scenario::free_massive:
    case Scenario::massless_3d:
        t.meta.emplace_back("a", format_exact(cfg.a));
        break;
    case Scenario::linear_potential:
        t.meta.emplace_back("lambda", format_exact(cfg.lambda));
        t.meta.emplace_back("mu", format_exact(cfg.mu));
        break;
    case Scenario::plane_wave:
        t.meta.emplace_back("k", format_exact(cfg.k));
        t.meta.emplace_back("amplitude", format_exact(cfg.amplitude));
        break;
    case Scenario::custom:
        t.meta.emplace_back("center", format_exact(cfg.center));
        t.meta.emplace_back("width", format_exact(cfg.width));
        t.meta.emplace_back("momentum", format_exact(cfg.momentum));
        break;
    }
    if (cfg.scenario == Scenario::massless_3d) {
        t.meta.emplace_back("radial_N", std::to_string(cfg.radial_n));
        t.meta.emplace_back("r_max", format_exact(cfg.r_max));
    } else {
        t.meta.emplace_back("N", std::to_string(cfg.n));
        t.meta.emplace_back("L", format_exact(length));
        t.meta.emplace_back("x0", format_exact(cfg.x0));
    }
    t.meta.emplace_back("times", format_list(cfg.times));
}

inline double max_abs(std::span<const double> v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// One time slice of a 1D run: numerical fields and optional oracles.
struct Slice {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> rho_num, j_num, rho_exact, j_exact, continuity;
    double norm = 0.0, mean_x = 0.0, mean_v = 0.0;
};

class SliceWriter {
public:
    SliceWriter(const ScenarioConfig& cfg, bool has_rho_exact, bool has_j_exact)
        : cfg_(cfg), rho_exact_(has_rho_exact), j_exact_(has_j_exact)
    {
        fields_.add_column("x");
        fields_.add_column("t");
        if (cfg.wants("rho")) {
            fields_.add_column("rho_num");
            if (rho_exact_) fields_.add_column("rho_exact");
        }
        if (cfg.wants("j")) {
            fields_.add_column("j_num");
            if (j_exact_) fields_.add_column("j_exact");
        }
        if (cfg.wants("continuity")) fields_.add_column("continuity");

        summary_.add_column("t");
        if (cfg.wants("norm")) summary_.add_column("norm");
        if (cfg.wants("mean_x")) summary_.add_column("mean_x");
        if (cfg.wants("mean_v")) summary_.add_column("mean_v");
        if (cfg.wants("continuity")) summary_.add_column("continuity_max");
        if (cfg.wants("rho") && rho_exact_) summary_.add_column("rho_error_max");
        if (cfg.wants("j") && j_exact_) summary_.add_column("j_error_max");
    }

    void add(const Slice& s)
    {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            std::size_t c = 0;
            fields_.columns[c++].push_back(s.x[i]);
            fields_.columns[c++].push_back(s.t);
            if (cfg_.wants("rho")) {
                fields_.columns[c++].push_back(s.rho_num[i]);
                if (rho_exact_) fields_.columns[c++].push_back(s.rho_exact[i]);
            }
            if (cfg_.wants("j")) {
                fields_.columns[c++].push_back(s.j_num[i]);
                if (j_exact_) fields_.columns[c++].push_back(s.j_exact[i]);
            }
            if (cfg_.wants("continuity")) fields_.columns[c++].push_back(s.continuity[i]);
        }
        std::size_t c = 0;
        summary_.columns[c++].push_back(s.t);
        if (cfg_.wants("norm")) summary_.columns[c++].push_back(s.norm);
        if (cfg_.wants("mean_x")) summary_.columns[c++].push_back(s.mean_x);
        if (cfg_.wants("mean_v")) summary_.columns[c++].push_back(s.mean_v);
        if (cfg_.wants("continuity")) summary_.columns[c++].push_back(max_abs(s.continuity));
        if (cfg_.wants("rho") && rho_exact_)
            summary_.columns[c++].push_back(max_abs_diff(s.rho_num, s.rho_exact));
        if (cfg_.wants("j") && j_exact_) summary_.columns[c++].push_back(max_abs_diff(s.j_num, s.j_exact));
    }

    Table& fields() { return fields_; }
    Table& summary() { return summary_; }

private:
    const ScenarioConfig& cfg_;
    bool rho_exact_, j_exact_;
    Table fields_, summary_;
};

// Numerical observables of a spectral state.
inline Slice numerical_slice(const MomentumWaveFunction& phi, const ScenarioConfig& cfg, Diagnostics& diag,
                             bool check_edges = true)
{
    const PhysicalConstants& k = cfg.constants;
    Slice s;
    s.t = phi.time;
    const WaveFunction psi = inverse_transform(phi);
    if (check_edges) check_boundary(psi, &diag);
    s.x = phi.grid.positions();
    s.rho_num = density(psi);
    if (cfg.wants("j")) s.j_num = current_spectral_1d(phi, k).values;
    if (cfg.wants("continuity"))
        s.continuity = continuity_residual([&](double) { return phi; }, phi.time, 0.0, k, TimeDerivative::generator);
    s.norm = norm(psi);
    s.mean_x = mean_position(psi);
    s.mean_v = mean_velocity(phi, k);
    return s;
}

inline Grid1D scenario_grid(const ScenarioConfig& cfg, double length)
{
    return Grid1D(cfg.n, length, cfg.x0, cfg.constants.hbar);
}

inline RunResult run_lorentzian(const ScenarioConfig& cfg)
{
    RunResult out;
    const Grid1D g = scenario_grid(cfg, cfg.length);
    const double a = cfg.a;
    const auto phi0 = sample_momentum(g, [a](double p) { return std::sqrt(a) * std::exp(-a * std::abs(p)); });
    SliceWriter w(cfg, true, true);
    for (double t : cfg.times) {
        Slice s = numerical_slice(evolve_free(phi0, t, cfg.constants), cfg, out.diagnostics);
        s.rho_exact.resize(s.x.size());
        s.j_exact.resize(s.x.size());
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            s.rho_exact[i] = std::norm(lorentzian_massless_periodic(s.x[i], t, a, g.length()));
            s.j_exact[i] = lorentzian_massless(s.x[i], t, a).j;
        }
        w.add(s);
    }
    out.fields = std::move(w.fields());
    out.summary = std::move(w.summary());
    return out;
}

inline RunResult run_massive(const ScenarioConfig& cfg)
{
    RunResult out;
    const Grid1D g = scenario_grid(cfg, cfg.length);
    const PhysicalConstants& k = cfg.constants;
    const double a = cfg.a;
    const auto phi0 = sample_momentum(g, [&](double p) { return massive_packet_momentum(p, 0.0, a, k); });
    SliceWriter w(cfg, true, true);
    for (double t : cfg.times) {
        Slice s = numerical_slice(evolve_free(phi0, t, k), cfg, out.diagnostics);
        s.rho_exact.resize(s.x.size());
        for (std::size_t i = 0; i < s.x.size(); ++i) s.rho_exact[i] = std::norm(massive_packet(s.x[i], t, a, k));
        if (cfg.wants("j")) s.j_exact = massive_packet_current_sweep(s.x, t, a, k);
        w.add(s);
    }
    out.fields = std::move(w.fields());
    out.summary = std::move(w.summary());
    return out;
}

inline RunResult run_movers(const ScenarioConfig& cfg)
{
    RunResult out;
    const Grid1D g = scenario_grid(cfg, cfg.length);
    const PhysicalConstants& k = cfg.constants;
    const double a = cfg.a;
    const auto phi0 = sample_momentum(g, [a](double p) { return std::sqrt(a) * std::exp(-a * std::abs(p)); });
    const auto [plus0, minus0] = split_movers(phi0);

    Table& f = out.fields;
    for (const char* name : {"x", "t", "rho_plus_num", "rho_plus_exact", "j_plus_num", "j_plus_exact",
                             "rho_minus_num", "rho_minus_exact", "j_minus_num", "j_minus_exact"})
        f.add_column(name);
    if (cfg.wants("continuity")) {
        f.add_column("continuity_plus");
        f.add_column("continuity_minus");
    }
    Table& sum = out.summary;
    for (const char* name : {"t", "norm_plus", "norm_minus", "mean_x_plus", "mean_x_minus", "mean_v_plus",
                             "mean_v_minus", "mover_identity_max", "rho_error_max"})
        sum.add_column(name);
    if (cfg.wants("continuity")) sum.add_column("continuity_max");

    for (double t : cfg.times) {
        const MomentumWaveFunction plus = evolve_free(plus0, t, k), minus = evolve_free(minus0, t, k);
        const WaveFunction pp = inverse_transform(plus), pm = inverse_transform(minus);
        check_boundary(pp, &out.diagnostics);
        check_boundary(pm, &out.diagnostics);
        const auto rp = density(pp), rm = density(pm);
        const auto jp = current_spectral_1d(plus, k).values, jm = current_spectral_1d(minus, k).values;
        std::vector<double> cp, cm;
        if (cfg.wants("continuity")) {
            cp = mover_continuity_residual(plus, 1.0, k);
            cm = mover_continuity_residual(minus, -1.0, k);
        }
        double identity = 0.0, error = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double x = g.x(i);
            const double ep = std::norm(lorentzian_mover_periodic(x, t, a, g.length(), Mover::plus));
            const double em = std::norm(lorentzian_mover_periodic(x, t, a, g.length(), Mover::minus));
            identity = std::max({identity, std::abs(jp[i] - k.c * rp[i]), std::abs(jm[i] + k.c * rm[i])});
            error = std::max({error, std::abs(rp[i] - ep), std::abs(rm[i] - em)});
            std::size_t c = 0;
            for (double v : {x, t, rp[i], ep, jp[i], k.c * ep, rm[i], em, jm[i], -k.c * em}) f.columns[c++].push_back(v);
            if (cfg.wants("continuity")) {
                f.columns[c++].push_back(cp[i]);
                f.columns[c++].push_back(cm[i]);
            }
        }
        std::size_t c = 0;
        for (double v : {t, norm(pp), norm(pm), mean_position(pp), mean_position(pm), mean_velocity(plus, k),
                         mean_velocity(minus, k), identity, error})
            sum.columns[c++].push_back(v);
        if (cfg.wants("continuity")) sum.columns[c++].push_back(std::max(max_abs(cp), max_abs(cm)));
    }
    return out;
}

// Advances psi to each requested time with Strang steps of at most cfg.dt.
template <class OnTime>
void march_splitstep(WaveFunction psi, const PotentialSpec& potential, const ScenarioConfig& cfg,
                     Diagnostics& diag, OnTime&& on_time)
{
    for (double t : cfg.times) {
        const double span = t - psi.time;
        if (span > 0.0) {
            const auto steps = std::size_t(std::ceil(span / cfg.dt - 1e-9));
            psi = evolve_splitstep(psi, SplitStepPlan{potential, span / double(steps), steps}, cfg.constants, &diag);
            psi.time = t;
        }
        on_time(psi);
    }
}

inline RunResult run_linear_potential(const ScenarioConfig& cfg)
{
    RunResult out;
    const Grid1D g = scenario_grid(cfg, cfg.length);
    const double lambda = cfg.lambda, mu = cfg.mu;
    const WaveFunction psi0 =
        inverse_transform(sample_momentum(g, [&](double p) { return linear_potential_momentum(p, 0.0, lambda, mu); }));

    SliceWriter w(cfg, true, false);
    Table& sum = w.summary();
    const std::size_t mx = sum.add_column("mean_x_exact"), mv = sum.add_column("mean_v_exact");
    march_splitstep(psi0, LinearPotential{mu}, cfg, out.diagnostics, [&](const WaveFunction& psi) {
        Slice s = numerical_slice(forward_transform(psi), cfg, out.diagnostics);
        s.rho_exact.resize(s.x.size());
        for (std::size_t i = 0; i < s.x.size(); ++i)
            s.rho_exact[i] = std::norm(linear_potential_solution(s.x[i], psi.time, lambda, mu));
        w.add(s);
        sum.columns[mx].push_back(linear_potential_mean_x(psi.time, lambda, mu));
        sum.columns[mv].push_back(linear_potential_mean_v(psi.time, lambda, mu));
    });
    out.fields = std::move(w.fields());
    out.summary = std::move(sum);
    return out;
}

inline RunResult run_plane_wave(const ScenarioConfig& cfg, double& length)
{
    RunResult out;
    const PhysicalConstants& k = cfg.constants;
    // The box must hold a whole number of wavelengths for the wave to be periodic.
    length = cfg.length;
    if (cfg.k != 0.0) {
        const double wavelength = 2.0 * std::numbers::pi * k.hbar / std::abs(cfg.k);
        const double cycles = std::max(1.0, std::round(cfg.length / wavelength));
        length = cycles * wavelength;
        if (std::abs(length - cfg.length) > 1e-12 * cfg.length)
            out.diagnostics.warn("plane_wave: grid.L adjusted from " + format_exact(cfg.length) + " to " +
                                 format_exact(length) + " to fit whole wavelengths");
    }
    const Grid1D g = scenario_grid(cfg, length);
    if (cfg.k != 0.0 && std::abs(cfg.k) >= g.p_max())
        throw ConfigError("params.k = " + format_exact(cfg.k) + " is beyond the momentum ladder (p_max = " +
                              format_exact(g.p_max()) + "); increase grid.N",
                          "params.k");
    const double kk = cfg.k, amp = cfg.amplitude;
    const auto phi0 = forward_transform(sample(g, [&](double x) { return amp * std::polar(1.0, kk * x / k.hbar); }));
    SliceWriter w(cfg, true, true);
    for (double t : cfg.times) {
        Slice s = numerical_slice(evolve_free(phi0, t, k), cfg, out.diagnostics, false);
        s.rho_exact.resize(s.x.size());
        s.j_exact.resize(s.x.size());
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const auto pw = plane_wave(s.x[i], t, kk, amp, k);
            s.rho_exact[i] = pw.rho;
            s.j_exact[i] = pw.j[0];
        }
        w.add(s);
    }
    out.fields = std::move(w.fields());
    out.summary = std::move(w.summary());
    return out;
}

inline RunResult run_massless_3d(const ScenarioConfig& cfg)
{
    RunResult out;
    const RadialGrid rg(cfg.radial_n, cfg.r_max);
    const double a = cfg.a;
    Table& f = out.fields;
    f.add_column("r");
    f.add_column("t");
    if (cfg.wants("rho")) f.add_column("rho");
    if (cfg.wants("j")) f.add_column("j_r");
    if (cfg.wants("continuity")) f.add_column("continuity");
    Table& sum = out.summary;
    sum.add_column("t");
    sum.add_column("norm");
    if (cfg.wants("continuity")) sum.add_column("continuity_max");

    for (double t : cfg.times) {
        std::vector<double> rho(rg.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < rg.size(); ++i) {
            const double r = rg.r(i);
            const FieldValue v = massless_3d(r, t, a);
            rho[i] = v.rho;
            std::size_t c = 0;
            f.columns[c++].push_back(r);
            f.columns[c++].push_back(t);
            if (cfg.wants("rho")) f.columns[c++].push_back(v.rho);
            if (cfg.wants("j")) f.columns[c++].push_back(v.j);
            if (cfg.wants("continuity")) {
                const double res = massless_3d_continuity_residual(r, t, a);
                worst = std::max(worst, std::abs(res));
                f.columns[c++].push_back(res);
            }
        }
        sum.columns[0].push_back(t);
        sum.columns[1].push_back(rg.integrate(rho));
        if (cfg.wants("continuity")) sum.columns[2].push_back(worst);
    }
    return out;
}

inline RunResult run_custom(const ScenarioConfig& cfg)
{
    RunResult out;
    const Grid1D g = scenario_grid(cfg, cfg.length);
    const PhysicalConstants& k = cfg.constants;
    const double x0 = cfg.center, sigma = cfg.width, p0 = cfg.momentum;
    const double amp = std::pow(2.0 * std::numbers::pi * sigma * sigma, -0.25);
    const WaveFunction psi0 = sample(g, [&](double x) {
        const double u = (x - x0) / sigma;
        return amp * std::exp(-0.25 * u * u) * std::polar(1.0, p0 * x / k.hbar);
    });
    SliceWriter w(cfg, false, false);
    auto record = [&](const WaveFunction& psi) { w.add(numerical_slice(forward_transform(psi), cfg, out.diagnostics)); };

    switch (cfg.potential) {
    case PotentialKind::none: {
        const auto phi0 = forward_transform(psi0);
        for (double t : cfg.times) w.add(numerical_slice(evolve_free(phi0, t, k), cfg, out.diagnostics));
        break;
    }
    case PotentialKind::linear:
        march_splitstep(psi0, LinearPotential{cfg.slope}, cfg, out.diagnostics, record);
        break;
    case PotentialKind::sampled: {
        Table file;
        try {
            file = read_csv(cfg.potential_file);
        } catch (const std::exception& e) {
            throw ConfigError("potential.file: " + std::string(e.what()), "potential.file");
        }
        std::vector<double> v;
        try {
            v = file.column("V");
        } catch (const std::exception&) {
            throw ConfigError("potential.file: needs a column named V", "potential.file");
        }
        if (v.size() != g.size())
            throw ConfigError("potential.file: has " + std::to_string(v.size()) + " rows, grid.N is " +
                                  std::to_string(g.size()),
                              "potential.file");
        march_splitstep(psi0, SampledPotential{std::move(v)}, cfg, out.diagnostics, record);
        break;
    }
    }
    out.fields = std::move(w.fields());
    out.summary = std::move(w.summary());
    return out;
}

} // namespace detail

/// Runs one configured scenario and returns its field and summary tables.
/// Closed-form scenarios carry oracle columns beside the numerical ones.
inline RunResult run(const ScenarioConfig& cfg)
{
    cfg.constants.validate();
    RunResult out;
    double length = cfg.length;
    switch (cfg.scenario) {
    case Scenario::free_massless_lorentzian: out = detail::run_lorentzian(cfg); break;
    case Scenario::free_massless_movers: out = detail::run_movers(cfg); break;
    case Scenario::free_massive: out = detail::run_massive(cfg); break;
    case Scenario::linear_potential: out = detail::run_linear_potential(cfg); break;
    case Scenario::plane_wave: out = detail::run_plane_wave(cfg, length); break;
    case Scenario::massless_3d: out = detail::run_massless_3d(cfg); break;
    case Scenario::custom: out = detail::run_custom(cfg); break;
    }
    detail::describe(out.fields, cfg, length);
    detail::describe(out.summary, cfg, length);
    const std::string count = std::to_string(out.diagnostics.count());
    out.fields.meta.emplace_back("warnings", count);
    out.summary.meta.emplace_back("warnings", count);
    return out;
}

/// "dir/name.csv" -> "dir/name_summary.csv".
inline std::string summary_path(const std::string& path)
{
    std::filesystem::path p(path);
    const std::string ext = p.extension().string();
    p.replace_filename(p.stem().string() + "_summary" + ext);
    return p.string();
}

/// Writes the field table to cfg.output_path and the summary beside it.
inline std::vector<std::string> write_outputs(const ScenarioConfig& cfg, const RunResult& result)
{
    const Format format = cfg.format == "json" ? Format::json : Format::csv;
    const std::string second = summary_path(cfg.output_path);
    write_table(cfg.output_path, result.fields, format);
    write_table(second, result.summary, format);
    return {cfg.output_path, second};
}

} // namespace salpeter
