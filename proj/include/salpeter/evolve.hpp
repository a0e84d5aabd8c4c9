#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "constants.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "hamiltonian.hpp"
#include "specfun.hpp"

namespace salpeter {

struct FreePlan {};

struct LinearPotentialPlan {
    double slope = 1.0;
};

struct SplitStepPlan {
    PotentialSpec potential;
    double dt = 1e-3;
    std::size_t steps = 1;
};

using EvolutionPlan = std::variant<FreePlan, LinearPotentialPlan, SplitStepPlan>;

inline void validate(const EvolutionPlan& plan)
{
    if (const auto* lin = std::get_if<LinearPotentialPlan>(&plan)) {
        if (!(lin->slope > 0.0)) throw std::invalid_argument("linear potential: slope must be positive");
    } else if (const auto* ss = std::get_if<SplitStepPlan>(&plan)) {
        if (!(ss->dt > 0.0)) throw std::invalid_argument("split-step: dt must be positive");
        if (ss->steps < 1) throw std::invalid_argument("split-step: steps must be >= 1");
    }
}

/// phi(p, t) = exp(-i E(p) t / hbar) phi(p, 0).
inline MomentumWaveFunction evolve_free(const MomentumWaveFunction& phi0, double t,
                                        const PhysicalConstants& k)
{
    require_matching_hbar(phi0.grid, k);
    MomentumWaveFunction out = phi0;
    for (std::size_t n = 0; n < out.samples.size(); ++n)
        out.samples[n] *= std::polar(1.0, -symbol(phi0.grid.p(n), k) * t / k.hbar);
    out.time = phi0.time + t;
    return out;
}

namespace detail {

// exp(i c eps(p) p^2 / (2 hbar mu)): the characteristics phase of the
// massless linear-potential problem. eps(0) = 0 leaves the p = 0 node alone.
inline cplx linear_potential_phase(double p, double slope, const PhysicalConstants& k)
{
    return std::polar(1.0, k.c * sign(p) * p * p / (2.0 * k.hbar * slope));
}

inline void require_massless_linear(double slope, const PhysicalConstants& k)
{
    if (!k.massless())
        throw PreconditionError("evolve_linear_potential: closed characteristics exist only for m = 0; "
                                "use evolve_splitstep for massive particles");
    if (!(slope > 0.0)) throw std::invalid_argument("evolve_linear_potential: slope must be positive");
}

} // namespace detail

/// Exact evolution in V = slope * x for m = 0:
///   phi(p, t) = exp(i c eps(p) p^2 / (2 hbar mu)) chi(p + mu t).
/// `chi` is the profile function of momentum. Throws AliasingError when
/// the shifted profile is not contained in the momentum ladder.
template <class Profile>
    requires std::invocable<Profile, double>
MomentumWaveFunction evolve_linear_potential(const Grid1D& grid, Profile&& chi, double t,
                                             double slope, const PhysicalConstants& k)
{
    detail::require_massless_linear(slope, k);
    require_matching_hbar(grid, k);
    const double shift = slope * t;
    MomentumWaveFunction out{grid, std::vector<cplx>(grid.size()), t};
    double peak = 0.0;
    for (std::size_t n = 0; n < grid.size(); ++n) {
        const double p = grid.p(n);
        out.samples[n] = detail::linear_potential_phase(p, slope, k) * cplx(chi(p + shift));
        peak = std::max(peak, std::abs(out.samples[n]));
    }
    const double edge = std::max(std::abs(out.samples[grid.size() / 2]),
                                 std::abs(out.samples[grid.size() / 2 + 1]));
    if (!(peak > 0.0) || edge > 1e-8 * peak)
        throw AliasingError("evolve_linear_potential: profile shifted by mu t = " +
                                format_number(shift) + " leaves the momentum ladder (p_max = " +
                                format_number(grid.p_max()) + ")",
                            shift);
    return out;
}

/// Same evolution for a sampled initial profile chi(p_n). The non-integer
/// shift p -> p + mu t is applied exactly through the position-space factor
/// exp(-i mu t x / hbar), so chi must be band limited on the ladder.
inline MomentumWaveFunction evolve_linear_potential(const MomentumWaveFunction& chi, double t,
                                                    double slope, const PhysicalConstants& k)
{
    detail::require_massless_linear(slope, k);
    const Grid1D& g = chi.grid;
    require_matching_hbar(g, k);
    const double shift = slope * t;

    double total = 0.0, lost = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) {
        const double w = std::norm(chi.samples[n]);
        const double q = g.p(n) - shift;
        total += w;
        if (q <= -g.p_max() || q > g.p_max()) lost += w;
    }
    if (!(total > 0.0) || lost > 1e-16 * total)
        throw AliasingError("evolve_linear_potential: profile shifted by mu t = " +
                                format_number(shift) + " leaves the momentum ladder (p_max = " +
                                format_number(g.p_max()) + ")",
                            shift);

    Fft fft(g.size());
    WaveFunction psi = inverse_transform(chi, fft);
    for (std::size_t j = 0; j < g.size(); ++j)
        psi.samples[j] *= std::polar(1.0, -shift * g.x(j) / k.hbar);
    MomentumWaveFunction out = forward_transform(psi, fft);
    for (std::size_t n = 0; n < g.size(); ++n)
        out.samples[n] *= detail::linear_potential_phase(g.p(n), slope, k);
    out.time = chi.time + t;
    return out;
}

/// Strang split-step propagation with potential half steps outermost:
///   psi <- exp(-i V dt / 2 hbar) exp(-i T dt / hbar) exp(-i V dt / 2 hbar) psi
/// repeated plan.steps times. Requires dt max|V| / hbar < 0.5. Warns once
/// when the density at the box edge exceeds 1e-6 of its peak.
inline WaveFunction evolve_splitstep(const WaveFunction& psi0, const SplitStepPlan& plan,
                                     const PhysicalConstants& k, Diagnostics* diag = nullptr)
{
    validate(EvolutionPlan{plan});
    const Grid1D& g = psi0.grid;
    require_matching_hbar(g, k);
    const std::size_t n = g.size();
    const std::vector<double> v = potential_values(plan.potential, g);

    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    if (plan.dt * vmax / k.hbar >= 0.5)
        throw PreconditionError("evolve_splitstep: dt max|V| / hbar = " +
                                format_number(plan.dt * vmax / k.hbar) + " must stay below 0.5");

    std::vector<cplx> half(n), kinetic(n);
    for (std::size_t j = 0; j < n; ++j) half[j] = std::polar(1.0, -0.5 * v[j] * plan.dt / k.hbar);
    // The unnormalized forward/backward pair multiplies by N; fold 1/N in.
    for (std::size_t m = 0; m < n; ++m)
        kinetic[m] = std::polar(1.0 / double(n), -symbol(g.p(m), k) * plan.dt / k.hbar);

    Fft fft(n);
    WaveFunction psi = psi0;
    auto& s = psi.samples;
    bool warned = false;
    for (std::size_t step = 0; step < plan.steps; ++step) {
        for (std::size_t j = 0; j < n; ++j) s[j] *= half[j];
        fft.forward(s);
        for (std::size_t m = 0; m < n; ++m) s[m] *= kinetic[m];
        fft.backward(s);
        for (std::size_t j = 0; j < n; ++j) s[j] *= half[j];
        psi.time = psi0.time + double(step + 1) * plan.dt;
        if (!warned && diag) {
            const double r = boundary_ratio(psi);
            if (r * r > 1e-6) {
                warn(diag, "evolve_splitstep: packet reached the box edge at t=" +
                               format_number(psi.time) + " (edge/peak density " +
                               format_number(r * r) + ")");
                warned = true;
            }
        }
    }
    return psi;
}

} // namespace salpeter
