#pragma once

// Density, the relativistic probability current in its three computable
// forms, expectation values, mover projection and continuity residuals.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "constants.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "evolve.hpp"
#include "grid.hpp"
#include "hamiltonian.hpp"
#include "parallel.hpp"
#include "specfun.hpp"

namespace salpeter {

inline std::vector<double> density(const WaveFunction& psi)
{
    std::vector<double> rho(psi.samples.size());
    std::transform(psi.samples.begin(), psi.samples.end(), rho.begin(),
                   [](const cplx& v) { return std::norm(v); });
    return rho;
}

/// Probability current sampled at `positions` (probability per unit time).
struct CurrentField {
    Grid1D grid;
    std::vector<double> positions;
    std::vector<double> values;
    double time = 0.0;
    /// max |Im j| / max |Re j| of the bilinear sum before it was discarded.
    double imaginary_residue = 0.0;
};

/// Symmetrized velocity weight c (p + k) / (sqrt(m^2c^2 + p^2) + sqrt(m^2c^2 + k^2)).
/// For m = 0 the single 0/0 term at p = k = 0 is assigned 0.
struct CurrentWeight {
    static double apply(double p, double k, double ep, double ek, double c)
    {
        const double den = ep + ek;
        return den == 0.0 ? 0.0 : c * (p + k) / den;
    }
};

namespace detail {

// B[d + N - 1] = sum_p w(p, p + d) conj(a_p) a_{p+d}, with p and p + d both
// on the ladder (integer wavenumbers in (-N/2, N/2], no wrap-around).
template <class Weight>
std::vector<cplx> current_difference_sums(const MomentumWaveFunction& phi,
                                          const PhysicalConstants& k)
{
    const Grid1D& g = phi.grid;
    const long n = long(g.size());
    const long lo = -n / 2 + 1;
    const double mc = k.mc();
    // Ladder in ascending wavenumber order.
    std::vector<cplx> a(n);
    std::vector<double> p(n), e(n);
    for (long w = lo; w <= n / 2; ++w) {
        const std::size_t i = std::size_t(w - lo);
        a[i] = phi.samples[g.slot(w)];
        p[i] = double(w) * g.dp();
        e[i] = std::hypot(p[i], mc);
    }
    std::vector<cplx> sums(2 * n - 1);
    parallel_for(std::size_t(2 * n - 1), [&](std::size_t idx) {
        const long d = long(idx) - (n - 1);
        const long first = std::max(0L, -d), last = std::min(n, n - d);
        cplx acc = 0.0;
        for (long i = first; i < last; ++i)
            acc += Weight::apply(p[i], p[i + d], e[i], e[i + d], k.c) * std::conj(a[i]) * a[i + d];
        sums[idx] = acc;
    }, 16);
    return sums;
}

// Evaluates sum_d B_d m_d exp(2 pi i d (x_j - x0) / L) on the grid nodes by
// folding d mod N and one inverse FFT; m_d is a per-difference multiplier.
template <class Multiplier>
std::vector<cplx> fold_on_grid(const Grid1D& g, const std::vector<cplx>& sums, Multiplier&& mult)
{
    const long n = long(g.size());
    std::vector<cplx> folded(n, 0.0);
    for (long d = -(n - 1); d <= n - 1; ++d) {
        const double theta = 2.0 * std::numbers::pi * double(d) * g.left() / g.length();
        folded[std::size_t(((d % n) + n) % n)] +=
            sums[std::size_t(d + n - 1)] * mult(d) * std::polar(1.0, theta);
    }
    Fft fft(g.size());
    fft.backward(folded);
    return folded;
}

inline CurrentField finish_current(const Grid1D& g, std::vector<double> positions,
                                   const std::vector<cplx>& raw, double scale, double time)
{
    CurrentField out{g, std::move(positions), std::vector<double>(raw.size()), time, 0.0};
    double max_re = 0.0, max_im = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out.values[i] = scale * raw[i].real();
        max_re = std::max(max_re, std::abs(raw[i].real()));
        max_im = std::max(max_im, std::abs(raw[i].imag()));
    }
    out.imaginary_residue = max_re > 0.0 ? max_im / max_re : max_im;
    return out;
}

inline double current_prefactor(const Grid1D& g)
{
    return g.dp() * g.dp() / (2.0 * std::numbers::pi * g.hbar());
}

} // namespace detail

/// Spectral current on the grid nodes,
///   j(x) = 1/(2 pi hbar) sum_{p,k} dp^2 w(p,k) conj(phi(p)) phi(k) exp(i (k - p) x / hbar).
/// Exact double sum in O(N^2): pairs are grouped by k - p and the sum over
/// differences is done with one FFT.
template <class Weight = CurrentWeight>
CurrentField current_spectral_1d(const MomentumWaveFunction& phi, const PhysicalConstants& k)
{
    require_matching_hbar(phi.grid, k);
    const auto sums = detail::current_difference_sums<Weight>(phi, k);
    const auto raw = detail::fold_on_grid(phi.grid, sums, [](long) { return 1.0; });
    return detail::finish_current(phi.grid, phi.grid.positions(), raw,
                                  detail::current_prefactor(phi.grid), phi.time);
}

/// Spectral current at arbitrary positions.
template <class Weight = CurrentWeight>
CurrentField current_spectral_1d(const MomentumWaveFunction& phi, const PhysicalConstants& k,
                                 std::span<const double> x_points)
{
    require_matching_hbar(phi.grid, k);
    const Grid1D& g = phi.grid;
    const auto sums = detail::current_difference_sums<Weight>(phi, k);
    const long n = long(g.size());
    std::vector<cplx> raw(x_points.size());
    parallel_for(x_points.size(), [&](std::size_t i) {
        const double theta = 2.0 * std::numbers::pi * x_points[i] / g.length();
        cplx acc = 0.0;
        for (long d = -(n - 1); d <= n - 1; ++d)
            acc += sums[std::size_t(d + n - 1)] * std::polar(1.0, theta * double(d));
        raw[i] = acc;
    }, 4);
    return detail::finish_current(g, std::vector<double>(x_points.begin(), x_points.end()), raw,
                                  detail::current_prefactor(g), phi.time);
}

/// d j / dx on the grid nodes, differentiating the double sum term by term.
template <class Weight = CurrentWeight>
std::vector<double> current_divergence_spectral(const MomentumWaveFunction& phi,
                                                const PhysicalConstants& k)
{
    require_matching_hbar(phi.grid, k);
    const Grid1D& g = phi.grid;
    const auto sums = detail::current_difference_sums<Weight>(phi, k);
    const double q = 2.0 * std::numbers::pi / g.length();
    const auto raw = detail::fold_on_grid(g, sums, [q](long d) { return cplx(0.0, q * double(d)); });
    std::vector<double> out(raw.size());
    const double scale = detail::current_prefactor(g);
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = scale * raw[i].real();
    return out;
}

/// Nonrelativistic current (hbar / m) Im(conj(psi) psi'), spectral derivative.
inline std::vector<double> nonrelativistic_current(const WaveFunction& psi, const PhysicalConstants& k)
{
    if (k.massless()) throw PreconditionError("nonrelativistic_current: requires m > 0");
    const WaveFunction d1 = spectral_derivative(psi, 1);
    std::vector<double> j(psi.samples.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        j[i] = k.hbar / k.m * std::imag(std::conj(psi.samples[i]) * d1.samples[i]);
    return j;
}

/// Kernel-form current on the grid nodes.
///
/// j(x) = (2 m c^2 / (pi hbar)) Im sum_{y < x < z} K_1(mc (z - y)/hbar)/(z - y) conj(psi(y)) psi(z),
/// massless: (2c/pi) Im sum 1/(z - y)^2 conj(psi(y)) psi(z), over node pairs with weight
/// dx^2 (half weight when y or z sits on x). Pairs with y = z drop out through the sign
/// structure. The node sum misses the corner where the Bessel factor is singular; its
/// leading part Im(conj(psi) psi')(x) * int_0^inf u^2 g(u) du is restored in closed form,
/// and the trapezoid rule along each diagonal gets its dx^2 end correction. O(N^2).
inline CurrentField current_kernel_1d(const WaveFunction& psi, const PhysicalConstants& k,
                                      Diagnostics* diag = nullptr)
{
    require_matching_hbar(psi.grid, k);
    const Grid1D& g = psi.grid;
    const std::size_t n = g.size();
    const double dx = g.dx();
    check_boundary(psi, diag, 1e-6);

    // g_d = g(d dx), plus the corner constant int u^2 g - sum dx (d dx)^2 g_d.
    std::vector<double> kern(n, 0.0);
    double corner = 0.0, prefactor = 0.0;
    if (k.massless()) {
        for (std::size_t d = 1; d < n; ++d) kern[d] = 1.0 / ((double(d) * dx) * (double(d) * dx));
        corner = 0.5 * dx;
        prefactor = 2.0 * k.c / std::numbers::pi;
    } else {
        const double kappa = k.mc() / k.hbar;
        double discrete = 0.0;
        for (std::size_t d = 1; d < n; ++d) {
            const double u = double(d) * dx;
            const double z = kappa * u;
            kern[d] = bessel_k_scaled(1, cplx(z)).real() * std::exp(-z) / u;
            discrete += dx * u * u * kern[d];
        }
        // Bessel tail beyond the box, so the constant does not depend on N.
        const double umax = double(n) * dx;
        if (kappa * umax < 700.0) {
            double tail = 0.0;
            for (double u = umax; kappa * u < 745.0; u += dx) {
                const double t = dx * u * bessel_k(1, kappa * u);
                tail += t;
                if (t < 1e-18 * discrete) break;
            }
            discrete += tail;
        }
        corner = std::numbers::pi / (2.0 * kappa * kappa) - discrete;
        prefactor = 2.0 * k.m * k.c * k.c / (std::numbers::pi * k.hbar);
    }

    const auto& s = psi.samples;
    const auto& ds = spectral_derivative(psi, 1).samples;
    // F[i] = sum over pairs a <= i < b of g_{b-a} conj(psi_a) psi_b. The
    // one-sided sums of psi' feed the O(dx^2) end correction of the
    // trapezoid rule along each diagonal z - y = const.
    std::vector<cplx> added(n), removed(n);
    std::vector<double> ends(n);
    parallel_for(n, [&](std::size_t i) {
        cplx right = 0.0, right_d = 0.0, left = 0.0, left_d = 0.0;
        for (std::size_t b = i + 1; b < n; ++b) {
            right += kern[b - i] * s[b];
            right_d += kern[b - i] * ds[b];
        }
        for (std::size_t a = 0; a < i; ++a) {
            left += kern[i - a] * std::conj(s[a]);
            left_d += kern[i - a] * std::conj(ds[a]);
        }
        added[i] = std::conj(s[i]) * right;
        removed[i] = left * s[i];
        ends[i] = std::imag(std::conj(ds[i]) * right + std::conj(s[i]) * right_d -
                            left_d * s[i] - left * ds[i]);
    });
    std::vector<cplx> cut(n);
    cplx running = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        running += added[i] - removed[i];
        cut[i] = running;
    }

    CurrentField out{g, g.positions(), std::vector<double>(n), psi.time, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const cplx before = i > 0 ? cut[i - 1] : cplx(0.0);
        const double pairs = 0.5 * (before + cut[i]).imag() * dx * dx;
        const double j0 = std::imag(std::conj(s[i]) * ds[i]);
        out.values[i] = prefactor * (pairs + j0 * corner - dx * dx * dx / 12.0 * ends[i]);
    }
    return out;
}

/// Truncated power-series current
///   j = -(i m c^2 / hbar) sum_{n=1}^{order} c_n (hbar/mc)^{2n} sum_{k=0}^{2n-1} (-1)^k d^k psi* d^{2n-1-k} psi,
/// c_n = (2n-3)!!/(2n)!!. order = 1 is the nonrelativistic current. Valid for packets
/// with max |p| < mc; warns when the terms stop decreasing.
inline CurrentField current_series(const WaveFunction& psi, const PhysicalConstants& k, int order,
                                   Diagnostics* diag = nullptr)
{
    if (k.massless())
        throw PreconditionError("current_series: the expansion in p / mc has no m -> 0 limit");
    if (order < 1) throw std::invalid_argument("current_series: order must be >= 1");
    require_matching_hbar(psi.grid, k);
    const std::size_t n = psi.samples.size();

    Fft fft(n);
    std::vector<std::vector<cplx>> deriv(std::size_t(2 * order));
    deriv[0] = psi.samples;
    for (int d = 1; d < 2 * order; ++d) deriv[std::size_t(d)] = spectral_derivative(psi, d, fft).samples;

    std::vector<double> total(n, 0.0);
    const double lambda2 = (k.hbar / k.mc()) * (k.hbar / k.mc());
    double coeff = 0.5;   // c_1
    double scale = lambda2;
    double previous = 0.0;
    for (int m = 1; m <= order; ++m) {
        if (m > 1) {
            coeff *= double(2 * m - 3) / double(2 * m);
            scale *= lambda2;
        }
        double largest = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx acc = 0.0;
            for (int q = 0; q < 2 * m; ++q) {
                const double sgn = q % 2 == 0 ? 1.0 : -1.0;
                acc += sgn * std::conj(deriv[std::size_t(q)][i]) * deriv[std::size_t(2 * m - 1 - q)][i];
            }
            // -(i m c^2 / hbar) * acc, with acc purely imaginary.
            const double term = k.m * k.c * k.c / k.hbar * coeff * scale * acc.imag();
            total[i] += term;
            largest = std::max(largest, std::abs(term));
        }
        if (m > 1 && largest > previous)
            warn(diag, "current_series: term " + std::to_string(m) +
                           " is larger than term " + std::to_string(m - 1) +
                           "; the packet is not band limited below mc");
        previous = largest;
    }
    return CurrentField{psi.grid, psi.grid.positions(), std::move(total), psi.time, 0.0};
}

inline double total_current(const CurrentField& j)
{
    double s = 0.0;
    for (double v : j.values) s += v;
    return s * j.grid.dx();
}

/// Group velocity c^2 p / E(p); c sign(p) for m = 0.
inline double velocity(double p, const PhysicalConstants& k)
{
    if (k.massless()) return k.c * sign(p);
    return k.c * p / std::hypot(p, k.mc());
}

/// sum |phi(p)|^2 v(p) dp. Bounded by c in magnitude.
inline double mean_velocity(const MomentumWaveFunction& phi, const PhysicalConstants& k)
{
    double s = 0.0;
    for (std::size_t n = 0; n < phi.samples.size(); ++n)
        s += std::norm(phi.samples[n]) * velocity(phi.grid.p(n), k);
    return s * phi.grid.dp();
}

/// First moment of |psi|^2, divided by the norm squared.
inline double mean_position(const WaveFunction& psi)
{
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < psi.samples.size(); ++j) {
        const double r = std::norm(psi.samples[j]);
        num += psi.grid.x(j) * r;
        den += r;
    }
    return den > 0.0 ? num / den : 0.0;
}

/// Right and left movers phi_{+-} = sqrt(2) theta(+-p) phi with theta(0) = 1/2,
/// so phi = (phi_+ + phi_-) / sqrt(2) exactly and the p = 0 node enters each
/// mover with amplitude phi(0) / sqrt(2).
inline std::pair<MomentumWaveFunction, MomentumWaveFunction> split_movers(const MomentumWaveFunction& phi)
{
    MomentumWaveFunction plus = phi, minus = phi;
    for (std::size_t n = 0; n < phi.samples.size(); ++n) {
        const double p = phi.grid.p(n);
        plus.samples[n] *= std::numbers::sqrt2 * step(p);
        minus.samples[n] *= std::numbers::sqrt2 * step(-p);
    }
    return {std::move(plus), std::move(minus)};
}

enum class TimeDerivative {
    /// (rho(t + dt) - rho(t - dt)) / (2 dt).
    centered_difference,
    /// (2 / hbar) Im(conj(psi) T psi) at t, free of time-discretization error.
    generator,
};

/// Pointwise d rho/dt + d j/dx at time t. `state_at(t)` returns the
/// momentum-space state at time t; the current divergence is spectral.
template <class StateAt>
std::vector<double> continuity_residual(StateAt&& state_at, double t, double dt,
                                        const PhysicalConstants& k,
                                        TimeDerivative mode = TimeDerivative::centered_difference)
{
    const MomentumWaveFunction now = state_at(t);
    std::vector<double> rate(now.samples.size());
    Fft fft(now.grid.size());
    if (mode == TimeDerivative::centered_difference) {
        if (!(dt > 0.0)) throw std::invalid_argument("continuity_residual: dt must be positive");
        const auto after = density(inverse_transform(state_at(t + dt), fft));
        const auto before = density(inverse_transform(state_at(t - dt), fft));
        for (std::size_t i = 0; i < rate.size(); ++i) rate[i] = (after[i] - before[i]) / (2.0 * dt);
    } else {
        const WaveFunction psi = inverse_transform(now, fft);
        const WaveFunction tpsi = apply_sqrt_spectral(psi, k, fft);
        for (std::size_t i = 0; i < rate.size(); ++i)
            rate[i] = 2.0 / k.hbar * std::imag(std::conj(psi.samples[i]) * tpsi.samples[i]);
    }
    const auto div = current_divergence_spectral(now, k);
    for (std::size_t i = 0; i < rate.size(); ++i) rate[i] += div[i];
    return rate;
}

/// Residual of (rho_+-, j = +-c rho_+-) for a single massless mover, with the
/// generator time derivative. Vanishes to rounding for a pure mover.
inline std::vector<double> mover_continuity_residual(const MomentumWaveFunction& mover, double direction,
                                                     const PhysicalConstants& k)
{
    Fft fft(mover.grid.size());
    const WaveFunction psi = inverse_transform(mover, fft);
    const WaveFunction tpsi = apply_sqrt_spectral(psi, k, fft);
    const WaveFunction dpsi = spectral_derivative(psi, 1, fft);
    std::vector<double> out(psi.samples.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double rate = 2.0 / k.hbar * std::imag(std::conj(psi.samples[i]) * tpsi.samples[i]);
        const double drho = 2.0 * std::real(std::conj(psi.samples[i]) * dpsi.samples[i]);
        out[i] = rate + direction * k.c * drho;
    }
    return out;
}

/// Time-indexed observables of one evolution.
struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> norms;
    std::vector<double> mean_x;
    std::vector<double> mean_v;
    std::vector<double> max_residual;
    std::vector<std::vector<double>> rho;
    std::vector<std::vector<double>> j;

    /// Appends one record; `residual` may be empty.
    void record(const MomentumWaveFunction& phi, const PhysicalConstants& k,
                std::span<const double> residual = {}, bool keep_fields = false)
    {
        if (!times.empty() && !(phi.time > times.back()))
            throw std::invalid_argument("ObservableSeries: times must increase");
        const WaveFunction psi = inverse_transform(phi);
        times.push_back(phi.time);
        norms.push_back(norm(psi));
        mean_x.push_back(mean_position(psi));
        mean_v.push_back(mean_velocity(phi, k));
        double worst = 0.0;
        for (double r : residual) worst = std::max(worst, std::abs(r));
        max_residual.push_back(worst);
        if (keep_fields) {
            rho.push_back(density(psi));
            j.push_back(current_spectral_1d(phi, k).values);
        }
    }

    std::size_t size() const noexcept { return times.size(); }
};

} // namespace salpeter
