#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "config.hpp"
#include "diagnostics.hpp"
#include "evolve.hpp"
#include "exact.hpp"
#include "io.hpp"
#include "observables.hpp"

namespace salpeter {

/// Rectangular (x, t) sampling window of a figure.
struct Lattice {
    double x_min, x_max;
    std::size_t nx;
    double t_min, t_max;
    std::size_t nt;

    double x(std::size_t i) const { return nx == 1 ? x_min : x_min + (x_max - x_min) * double(i) / double(nx - 1); }
    double t(std::size_t i) const { return nt == 1 ? t_min : t_min + (t_max - t_min) * double(i) / double(nt - 1); }
    double dx() const { return nx == 1 ? 0.0 : (x_max - x_min) / double(nx - 1); }

    std::vector<double> xs() const
    {
        std::vector<double> v(nx);
        for (std::size_t i = 0; i < nx; ++i) v[i] = x(i);
        return v;
    }
};

/// Parameters a figure reads; every entry may be overridden by name.
using FigureParams = std::map<std::string, double>;

inline FigureParams figure_defaults(int n)
{
    switch (n) {
    case 1:
    case 2: return {{"a", 1}, {"x_min", -10}, {"x_max", 10}, {"nx", 201}, {"t_min", 0}, {"t_max", 5}, {"nt", 11}};
    case 3: return {{"a", 1}, {"x_min", -5}, {"x_max", 15}, {"nx", 401}, {"t_min", 0}, {"t_max", 10}, {"nt", 11}};
    case 4:
    case 5:
        return {{"a", 1}, {"m", 0.5}, {"x_min", -10}, {"x_max", 10}, {"nx", 201}, {"t_min", 0}, {"t_max", 5}, {"nt", 11}};
    case 6:
        return {{"lambda", 1}, {"mu", 1}, {"x_min", -8}, {"x_max", 4}, {"nx", 241}, {"t_min", -5}, {"t_max", 5}, {"nt", 41}};
    case 7: return {{"lambda", 1}, {"mu", 1}, {"t_min", -5}, {"t_max", 5}, {"nt", 201}};
    case 8:
        return {{"lambda", 1}, {"mu", 1}, {"x_min", -8}, {"x_max", 4}, {"nx", 241}, {"t_min", -5}, {"t_max", 5},
                {"nt", 41}, {"N", 2048}, {"L", 256}};
    case 9:
    case 10: return {{"a", 1}, {"x_min", 0}, {"x_max", 10}, {"nx", 201}, {"t_min", 0}, {"t_max", 5}, {"nt", 11}};
    default: throw ConfigError("figure number must be in 1..10, got " + std::to_string(n), "n");
    }
}

namespace detail {

inline std::size_t lattice_count(const FigureParams& p, const char* key)
{
    const double v = p.at(key);
    if (!(v >= 1.0) || v != std::floor(v)) throw ConfigError(std::string(key) + " must be a positive integer", key);
    return std::size_t(v);
}

inline Lattice lattice_of(const FigureParams& p)
{
    Lattice l{0.0, 0.0, 1, p.at("t_min"), p.at("t_max"), lattice_count(p, "nt")};
    if (p.count("nx")) {
        l.x_min = p.at("x_min");
        l.x_max = p.at("x_max");
        l.nx = lattice_count(p, "nx");
        if (!(l.x_max > l.x_min) && l.nx > 1) throw ConfigError("x_max must exceed x_min", "x_max");
    }
    if (!(l.t_max > l.t_min) && l.nt > 1) throw ConfigError("t_max must exceed t_min", "t_max");
    return l;
}

inline void require_positive_param(const FigureParams& p, const char* key)
{
    if (p.count(key) && !(p.at(key) > 0.0)) throw ConfigError(std::string(key) + " must be positive", key);
}

inline Table lattice_table(const char* value_name)
{
    Table t;
    t.add_column("x");
    t.add_column("t");
    t.add_column(value_name);
    return t;
}

// Fills x, t, value over the lattice; value(x, t) per node.
template <class F>
void fill(Table& table, const Lattice& l, F&& value)
{
    for (std::size_t it = 0; it < l.nt; ++it)
        for (std::size_t ix = 0; ix < l.nx; ++ix) table.add_row({l.x(ix), l.t(it), value(l.x(ix), l.t(it))});
}

inline Table figure_linear_current(const FigureParams& p, const Lattice& l, Diagnostics* diag)
{
    const double lambda = p.at("lambda"), mu = p.at("mu");
    const std::size_t n = lattice_count(p, "N");
    const double length = p.at("L");
    if (!(length > 0.0)) throw ConfigError("L must be positive", "L");
    const Grid1D g(n, length, -0.5 * length);
    const PhysicalConstants k = PhysicalConstants::natural();
    auto chi = [&](double q) { return linear_potential_profile(q, lambda, mu); };
    const auto xs = l.xs();
    Table table = lattice_table("j");
    for (std::size_t it = 0; it < l.nt; ++it) {
        const double t = l.t(it);
        // chi(p + mu t) with the characteristics phase is the state at time t.
        const MomentumWaveFunction phi = evolve_linear_potential(g, chi, t, mu, k);
        check_boundary(inverse_transform(phi), diag, 1e-6);
        const CurrentField j = current_spectral_1d(phi, k, xs);
        for (std::size_t ix = 0; ix < l.nx; ++ix) table.add_row({xs[ix], t, j.values[ix]});
    }
    return table;
}

} // namespace detail

/// Lattice data behind figure n (1..10) with the given overrides applied to
/// figure_defaults(n). Unknown override keys raise ConfigError.
inline Table figure(int n, const FigureParams& overrides = {}, Diagnostics* diag = nullptr)
{
    FigureParams p = figure_defaults(n);
    for (const auto& [key, value] : overrides) {
        if (!p.count(key)) throw ConfigError("figure " + std::to_string(n) + " has no parameter '" + key + "'", key);
        if (!std::isfinite(value)) throw ConfigError(key + " must be finite", key);
        p[key] = value;
    }
    for (const char* key : {"a", "m", "lambda", "mu"}) detail::require_positive_param(p, key);
    const Lattice l = detail::lattice_of(p);

    Table table;
    std::string quantity, units = "x [m], t [m], rho [1/m]";
    switch (n) {
    case 1: {
        const double a = p.at("a");
        quantity = "probability density of the free massless Lorentzian packet";
        table = detail::lattice_table("rho");
        detail::fill(table, l, [a](double x, double t) { return lorentzian_massless(x, t, a).rho; });
        break;
    }
    case 2: {
        const double a = p.at("a");
        quantity = "probability current of the free massless Lorentzian packet";
        units = "x [m], t [m], j [1/m]";
        table = detail::lattice_table("j");
        detail::fill(table, l, [a](double x, double t) { return lorentzian_massless(x, t, a).j; });
        break;
    }
    case 3: {
        const double a = p.at("a");
        quantity = "probability density of the right-moving massless packet";
        table = detail::lattice_table("rho_plus");
        table.add_column("peak_x");
        table.add_column("ct");
        for (std::size_t it = 0; it < l.nt; ++it) {
            const double t = l.t(it);
            std::vector<double> rho(l.nx);
            std::size_t best = 0;
            for (std::size_t ix = 0; ix < l.nx; ++ix) {
                rho[ix] = lorentzian_massless(l.x(ix), t, a, Mover::plus).rho;
                if (rho[ix] > rho[best]) best = ix;
            }
            for (std::size_t ix = 0; ix < l.nx; ++ix) table.add_row({l.x(ix), t, rho[ix], l.x(best), t});
        }
        break;
    }
    case 4: {
        const double a = p.at("a");
        const PhysicalConstants k = PhysicalConstants::natural(p.at("m"));
        quantity = "probability density of the free massive packet";
        units = "x [m], t [m], rho [1/m], m [1/m]";
        table = detail::lattice_table("rho");
        detail::fill(table, l, [&](double x, double t) { return std::norm(massive_packet(x, t, a, k)); });
        break;
    }
    case 5: {
        const double a = p.at("a");
        const PhysicalConstants k = PhysicalConstants::natural(p.at("m"));
        quantity = "probability current of the free massive packet";
        units = "x [m], t [m], j [1/m], m [1/m]";
        table = detail::lattice_table("j");
        const auto xs = l.xs();
        for (std::size_t it = 0; it < l.nt; ++it) {
            const double t = l.t(it);
            const auto j = massive_packet_current_sweep(xs, t, a, k);
            for (std::size_t ix = 0; ix < l.nx; ++ix) table.add_row({xs[ix], t, j[ix]});
        }
        break;
    }
    case 6: {
        const double lambda = p.at("lambda"), mu = p.at("mu");
        quantity = "probability density of the massless packet in the linear potential";
        units = "x [m], t [m], rho [1/m], mu [1/m^2]";
        table = detail::lattice_table("rho");
        table.add_column("classical_x");
        for (std::size_t it = 0; it < l.nt; ++it)
            for (std::size_t ix = 0; ix < l.nx; ++ix) {
                const double x = l.x(ix), t = l.t(it);
                table.add_row({x, t, std::norm(linear_potential_solution(x, t, lambda, mu)),
                               classical_lambda_trajectory(t, 0.0, 0.0, mu)});
            }
        break;
    }
    case 7: {
        const double lambda = p.at("lambda"), mu = p.at("mu");
        quantity = "mean position in the linear potential with the classical trajectory -|t|";
        units = "t [m], x [m], mu [1/m^2]";
        table.add_column("t");
        table.add_column("mean_x");
        table.add_column("classical_x");
        for (std::size_t it = 0; it < l.nt; ++it) {
            const double t = l.t(it);
            table.add_row({t, linear_potential_mean_x(t, lambda, mu), classical_lambda_trajectory(t, 0.0, 0.0, mu)});
        }
        break;
    }
    case 8:
        quantity = "probability current of the massless packet in the linear potential (spectral evaluation)";
        units = "x [m], t [m], j [1/m], mu [1/m^2]";
        table = detail::figure_linear_current(p, l, diag);
        break;
    case 9: {
        const double a = p.at("a");
        quantity = "probability density of the three-dimensional massless packet";
        units = "r [m], t [m], rho [1/m^3]";
        table = detail::lattice_table("rho");
        table.header[0] = "r";
        detail::fill(table, l, [a](double r, double t) { return massless_3d(r, t, a).rho; });
        break;
    }
    case 10: {
        const double a = p.at("a");
        quantity = "magnitude of the probability current of the three-dimensional massless packet";
        units = "r [m], t [m], j [1/m^3]";
        table = detail::lattice_table("j_norm");
        table.header[0] = "r";
        detail::fill(table, l, [a](double r, double t) { return std::abs(massless_3d(r, t, a).j); });
        break;
    }
    default: break;
    }

    table.meta.emplace_back("figure", std::to_string(n));
    table.meta.emplace_back("quantity", quantity);
    table.meta.emplace_back("units", units + " (natural units, hbar = c = 1)");
    for (const auto& [key, value] : p) table.meta.emplace_back(key, format_exact(value));
    return table;
}

} // namespace salpeter
