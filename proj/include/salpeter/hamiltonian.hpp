#pragma once

// The kinetic operator sqrt(m^2 c^4 - hbar^2 c^2 d^2/dx^2), realized twice:
// as a Fourier multiplier (the production route) and as a singular
// convolution with the Macdonald kernel (the validation route).

#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "constants.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace salpeter {

struct NoPotential {};

/// V(x) = slope * x.
struct LinearPotential {
    double slope = 1.0;
};

/// V sampled on the grid nodes.
struct SampledPotential {
    std::vector<double> values;
};

using PotentialSpec = std::variant<NoPotential, LinearPotential, SampledPotential>;

inline std::vector<double> potential_values(const PotentialSpec& spec, const Grid1D& grid)
{
    std::vector<double> v(grid.size(), 0.0);
    if (const auto* lin = std::get_if<LinearPotential>(&spec)) {
        for (std::size_t j = 0; j < grid.size(); ++j) v[j] = lin->slope * grid.x(j);
    } else if (const auto* s = std::get_if<SampledPotential>(&spec)) {
        if (s->values.size() != grid.size())
            throw std::invalid_argument("SampledPotential: expected " +
                                        std::to_string(grid.size()) + " values, got " +
                                        std::to_string(s->values.size()));
        for (double x : s->values)
            if (!std::isfinite(x))
                throw std::invalid_argument("SampledPotential: non-finite value");
        v = s->values;
    }
    return v;
}

/// sqrt(m^2 c^4 + p^2 c^2); exactly c|p| when m = 0.
inline double symbol(double p, const PhysicalConstants& k)
{
    return k.c * std::hypot(p, k.mc());
}

inline void require_matching_hbar(const Grid1D& grid, const PhysicalConstants& k)
{
    if (grid.hbar() != k.hbar)
        throw std::invalid_argument("grid hbar differs from PhysicalConstants::hbar");
}

inline WaveFunction apply_sqrt_spectral(const WaveFunction& psi, const PhysicalConstants& k,
                                        Fft& fft)
{
    require_matching_hbar(psi.grid, k);
    MomentumWaveFunction phi = forward_transform(psi, fft);
    for (std::size_t n = 0; n < phi.samples.size(); ++n)
        phi.samples[n] *= symbol(psi.grid.p(n), k);
    return inverse_transform(phi, fft);
}

inline WaveFunction apply_sqrt_spectral(const WaveFunction& psi, const PhysicalConstants& k)
{
    Fft fft(psi.grid.size());
    return apply_sqrt_spectral(psi, k, fft);
}

/// 1D kernel K(u) = -(m c^2 / pi) K_1(m c |u| / hbar) / |u|, or -c hbar / (pi u^2)
/// for m = 0.
inline double kernel_1d(double u, const PhysicalConstants& k)
{
    if (u == 0.0) throw SingularityError("kernel_1d: singular at u = 0");
    const double au = std::abs(u);
    if (k.massless()) return -k.c * k.hbar / (std::numbers::pi * au * au);
    const double z = k.mc() * au / k.hbar;
    const double k1 = bessel_k_scaled(1, cplx(z)).real() * std::exp(-z);
    return -k.m * k.c * k.c / std::numbers::pi * k1 / au;
}

/// 3D kernel K(u) = -(2 m^2 c^3 / ((2 pi)^2 hbar)) K_2(m c u / hbar) / u^2, with
/// massless limit -c hbar / (pi^2 u^4).
inline double kernel_3d(double u, const PhysicalConstants& k)
{
    if (u == 0.0) throw SingularityError("kernel_3d: singular at u = 0");
    const double au = std::abs(u);
    if (k.massless()) return -k.c * k.hbar / (std::numbers::pi * std::numbers::pi * au * au * au * au);
    const double z = k.mc() * au / k.hbar;
    const double k2 = bessel_k_scaled(2, cplx(z)).real() * std::exp(-z);
    const double two_pi = 2.0 * std::numbers::pi;
    return -2.0 * k.m * k.m * k.c * k.c * k.c / (two_pi * two_pi * k.hbar) * k2 / (au * au);
}

/// Weight K(|u|, |w|) of the smeared 3D current representation. Purely
/// imaginary.
inline cplx kernel_current_weight_3d(double u, double w, const PhysicalConstants& k)
{
    if (u == 0.0 || w == 0.0)
        throw SingularityError("kernel_current_weight_3d: singular for u = 0 or w = 0");
    const double au = std::abs(u), aw = std::abs(w), s = au + aw;
    const double cube = std::pow(2.0 * std::numbers::pi, 3);
    if (k.massless()) return cplx(0.0, -2.0 * k.c / cube / (au * aw * s * s * s));
    const double z = k.mc() * s / k.hbar;
    const double k2 = bessel_k_scaled(2, cplx(z)).real() * std::exp(-z);
    return cplx(0.0, -k.m * k.m * k.c * k.c * k.c / (cube * k.hbar * k.hbar) * k2 /
                         (au * aw * s));
}

namespace detail {

// Integral of K(u) u^2 over [0, h]: the curvature weight of the excluded
// cell [-h, h] is twice this, times psi''/2.
inline double kernel_1d_second_moment(double h, const PhysicalConstants& k)
{
    if (k.massless()) return -k.c * k.hbar / std::numbers::pi * h;
    const double kappa = k.mc() / k.hbar;
    auto f = [&](double u) {
        if (u == 0.0) return -k.c * k.hbar / std::numbers::pi;
        return -k.m * k.c * k.c / std::numbers::pi * u * bessel_k(1, kappa * u);
    };
    return integrate_adaptive(f, 0.0, h, 1e-14);
}

// tail[k] = integral of K(u) over u > (k + 1/2) dx, k = 0..n-1.
inline std::vector<double> kernel_1d_tails(std::size_t n, double dx, const PhysicalConstants& k)
{
    std::vector<double> tail(n);
    if (k.massless()) {
        for (std::size_t i = 0; i < n; ++i)
            tail[i] = -k.c * k.hbar / (std::numbers::pi * (double(i) + 0.5) * dx);
        return tail;
    }
    auto f = [&](double u) { return kernel_1d(u, k); };
    const double last = (double(n) - 0.5) * dx;
    tail[n - 1] = integrate_adaptive(f, last, std::numeric_limits<double>::infinity(), 1e-14);
    for (std::size_t i = n - 1; i-- > 0;) {
        const double a = (double(i) + 0.5) * dx;
        tail[i] = tail[i + 1] + integrate_panel(f, a, a + dx);
    }
    return tail;
}

} // namespace detail

/// Kernel-route application of the kinetic operator.
///
/// Evaluates  int K(x - y) [psi(y) - psi(x)] dy + m c^2 psi(x)  by a node
/// sum over the box that skips the singular cell, adds that cell's curvature
/// contribution psi''(x) * int_{-dx/2}^{dx/2} K(u) u^2 / 2 du, and subtracts
/// psi(x) times the kernel mass lying outside the box. O(N^2).
///
/// Throws SingularityError when m c dx / hbar > 1.
inline WaveFunction apply_sqrt_kernel(const WaveFunction& psi, const PhysicalConstants& k,
                                      Diagnostics* diag = nullptr)
{
    require_matching_hbar(psi.grid, k);
    const Grid1D& g = psi.grid;
    const std::size_t n = g.size();
    const double dx = g.dx();
    if (!k.massless()) {
        const double ratio = k.mc() * dx / k.hbar;
        if (ratio > 1.0)
            throw SingularityError("apply_sqrt_kernel: Compton wavelength under-resolved, m c dx / hbar = " +
                                       format_number(ratio),
                                   ratio);
    }
    check_boundary(psi, diag, 1e-6);

    std::vector<double> kern(n, 0.0);
    for (std::size_t d = 1; d < n; ++d) kern[d] = kernel_1d(double(d) * dx, k);
    // prefix[d] = sum_{1..d} kern
    std::vector<double> prefix(n, 0.0);
    for (std::size_t d = 1; d < n; ++d) prefix[d] = prefix[d - 1] + kern[d];

    const double cell = 2.0 * detail::kernel_1d_second_moment(0.5 * dx, k) * 0.5;
    const std::vector<double> tail = detail::kernel_1d_tails(n, dx, k);
    const double rest = k.m * k.c * k.c;

    WaveFunction out{g, std::vector<cplx>(n), psi.time};
    const auto& s = psi.samples;
    parallel_for(n, [&](std::size_t i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) acc += kern[i - j] * s[j];
        for (std::size_t j = i + 1; j < n; ++j) acc += kern[j - i] * s[j];
        const double ksum = prefix[i] + prefix[n - 1 - i];
        acc = (acc - ksum * s[i]) * dx;
        const cplx curvature = (s[(i + 1) % n] - 2.0 * s[i] + s[(i + n - 1) % n]) / (dx * dx);
        acc += cell * curvature;
        acc -= s[i] * (tail[i] + tail[n - 1 - i]);
        out.samples[i] = acc + rest * s[i];
    });
    return out;
}

} // namespace salpeter
