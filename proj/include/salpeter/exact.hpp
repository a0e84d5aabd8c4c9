#pragma once

// Closed-form solutions of the Salpeter equation in natural units unless a
// PhysicalConstants argument says otherwise.

#include <boost/math/differentiation/finite_difference.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "constants.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "specfun.hpp"

namespace salpeter {

/// Value triple returned by the closed forms.
struct FieldValue {
    cplx psi;
    double rho = 0.0;
    double j = 0.0;
};

enum class Mover { both, plus, minus };

namespace detail {

inline void require_positive(double v, const char* what)
{
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

// H(z) = (1/(1 - z^2) - artanh(z)/z) / z^2 = sum_{k>=1} 2k/(2k+1) z^(2k-2).
inline double lorentzian_h(double z)
{
    const double z2 = z * z;
    if (std::abs(z) < 0.5) {
        double sum = 0.0, pw = 1.0;
        for (int k = 1; k < 80; ++k) {
            const double term = 2.0 * k / (2.0 * k + 1.0) * pw;
            sum += term;
            if (term < 1e-17 * sum) break;
            pw *= z2;
        }
        return sum;
    }
    return (1.0 / (1.0 - z2) - std::atanh(z) / z) / z2;
}

// G(z) = (3 artanh(z)/z - (3 - 5z^2)/(1 - z^2)^2) / z^4 = sum_{k>=2} 4k(k-1)/(2k+1) z^(2k-4).
inline double massless_3d_g(double z)
{
    const double z2 = z * z;
    if (std::abs(z) < 0.5) {
        double sum = 0.0, pw = 1.0;
        for (int k = 2; k < 90; ++k) {
            const double term = 4.0 * k * (k - 1.0) / (2.0 * k + 1.0) * pw;
            sum += term;
            if (term < 1e-17 * sum) break;
            pw *= z2;
        }
        return sum;
    }
    const double w = 1.0 - z2;
    return (3.0 * std::atanh(z) / z - (3.0 - 5.0 * z2) / (w * w)) / (z2 * z2);
}

} // namespace detail

/// Massless packet with momentum profile sqrt(a) exp(-a|p|) (natural units):
///   psi = sqrt(a/(2 pi)) 2b / (x^2 + b^2),  b = a + i t.
/// Movers carry the profile sqrt(2 a) theta(+-p) exp(-a|p|) and translate
/// rigidly with j = +-rho.
///
/// The current is evaluated as j = 4axt/(pi q^2) [1/(1 - z^2) - x^2 H(z)/q]
/// with q = x^2 + t^2 + a^2 and z = 2xt/q, which has no cancellation at
/// small x or t.
inline FieldValue lorentzian_massless(double x, double t, double a, Mover mover = Mover::both)
{
    detail::require_positive(a, "lorentzian_massless: a");
    const cplx b(a, t);
    FieldValue out;
    switch (mover) {
    case Mover::both: {
        out.psi = std::sqrt(a / (2.0 * std::numbers::pi)) * 2.0 * b / (x * x + b * b);
        out.rho = std::norm(out.psi);
        const double q = x * x + t * t + a * a;
        const double z = 2.0 * x * t / q;
        out.j = 4.0 * a * x * t / (std::numbers::pi * q * q) *
                (1.0 / (1.0 - z * z) - x * x * detail::lorentzian_h(z) / q);
        break;
    }
    case Mover::plus:
    case Mover::minus: {
        const double dir = mover == Mover::plus ? 1.0 : -1.0;
        out.psi = std::sqrt(a / std::numbers::pi) / cplx(a, t - dir * x);
        out.rho = std::norm(out.psi);
        out.j = dir * out.rho;
        break;
    }
    }
    return out;
}

/// The same packet sampled from the momentum ladder of a box of length L:
/// the sum of all periodic images, in closed form
///   sum_k b / ((x + kL)^2 + b^2) = (pi/L) sinh(2 pi b/L) / (cosh(2 pi b/L) - cos(2 pi x/L)).
/// This is what a spectral grid represents exactly; it differs from the
/// open-line form by the image tails, O(a / L^2).
inline cplx lorentzian_massless_periodic(double x, double t, double a, double length)
{
    detail::require_positive(a, "lorentzian_massless_periodic: a");
    detail::require_positive(length, "lorentzian_massless_periodic: L");
    const cplx b(a, t);
    const double k = 2.0 * std::numbers::pi / length;
    const cplx images = (std::numbers::pi / length) * std::sinh(k * b) /
                        (std::cosh(k * b) - std::cos(k * x));
    return std::sqrt(a / (2.0 * std::numbers::pi)) * 2.0 * images;
}

/// Periodized mover with the p = 0 node at half weight, as produced by
/// split_movers on the ladder of a box of length L:
///   psi_+- = sqrt(a/pi) (pi/L) coth(pi (a + i t -+ i x) / L).
inline cplx lorentzian_mover_periodic(double x, double t, double a, double length, Mover mover)
{
    detail::require_positive(a, "lorentzian_mover_periodic: a");
    detail::require_positive(length, "lorentzian_mover_periodic: L");
    if (mover == Mover::both) return lorentzian_massless_periodic(x, t, a, length);
    const double dir = mover == Mover::plus ? 1.0 : -1.0;
    const cplx w = std::numbers::pi / length * cplx(a, t - dir * x);
    return std::sqrt(a / std::numbers::pi) * (std::numbers::pi / length) * std::cosh(w) / std::sinh(w);
}

/// Momentum profile of the massive packet at time t:
///   phi(p, t) = exp(-(a + i c t) sqrt(m^2c^2 + p^2) / hbar) / sqrt(2 mc K_1(2 a mc / hbar)).
inline cplx massive_packet_momentum(double p, double t, double a, const PhysicalConstants& k)
{
    detail::require_positive(a, "massive_packet: a");
    detail::require_positive(k.m, "massive_packet: m");
    const double kappa = k.mc();
    const double e = std::hypot(p, kappa);
    const double norm2 = 2.0 * kappa * bessel_k(1, 2.0 * a * kappa / k.hbar);
    return std::exp(-cplx(a, k.c * t) * e / k.hbar) / std::sqrt(norm2);
}

namespace detail {

inline cplx massive_radius(double x, cplx b)
{
    const cplx s2 = x * x + b * b;
    if (s2.real() <= 0.0 && s2.imag() == 0.0)
        throw DomainError("massive_packet: x^2 + (a + ict)^2 on the branch cut");
    return std::sqrt(s2);
}

} // namespace detail

/// Massive packet in position space:
///   psi = sqrt(mc / (pi hbar K_1(2 a mc / hbar))) (b/s) K_1(mc s / hbar),
///   b = a + i c t, s = sqrt(x^2 + b^2) on the principal branch.
inline cplx massive_packet(double x, double t, double a, const PhysicalConstants& k)
{
    detail::require_positive(a, "massive_packet: a");
    detail::require_positive(k.m, "massive_packet: m");
    const double kappa = k.mc();
    const cplx b(a, k.c * t);
    const cplx s = detail::massive_radius(x, b);
    const double n2 = kappa / (std::numbers::pi * k.hbar * bessel_k(1, 2.0 * a * kappa / k.hbar));
    return std::sqrt(n2) * (b / s) * bessel_k(1, kappa * s / k.hbar);
}

namespace detail {

// Integrand of the massive current, d j / dy, without the prefactor.
inline double massive_current_integrand(double y, cplx b, double kappa, double hbar)
{
    const cplx s = massive_radius(y, b);
    const cplx z = kappa * s / hbar;
    const cplx s2 = y * y + b * b;
    const cplx bracket = (y * y - b * b) / s2 * bessel_k(2, z) - bessel_k(0, z);
    return std::imag(bracket * std::conj(b / s) * std::conj(bessel_k(1, z)));
}

inline double massive_current_prefactor(double a, const PhysicalConstants& k)
{
    const double kappa = k.mc();
    return k.c * kappa * kappa /
           (std::numbers::pi * k.hbar * k.hbar * bessel_k(1, 2.0 * a * kappa / k.hbar));
}

} // namespace detail

/// Current of the massive packet,
///   j(x) = c (mc)^2 / (pi hbar^2 K_1(2 a mc/hbar)) int_0^x Im{[(y^2 - b^2)/(y^2 + b^2) K_2 - K_0] (b/s)* K_1*} dy,
/// Bessel arguments mc s / hbar. Adaptive Gauss-Kronrod to 1e-8 absolute;
/// throws QuadratureError otherwise.
inline double massive_packet_current(double x, double t, double a, const PhysicalConstants& k)
{
    detail::require_positive(a, "massive_packet_current: a");
    detail::require_positive(k.m, "massive_packet_current: m");
    if (x == 0.0 || t == 0.0) return 0.0;
    const cplx b(a, k.c * t);
    const double kappa = k.mc();
    auto f = [&](double y) { return detail::massive_current_integrand(y, b, kappa, k.hbar); };
    const double pre = detail::massive_current_prefactor(a, k);
    const double lo = std::min(0.0, x), hi = std::max(0.0, x);
    const double v = integrate_adaptive(f, lo, hi, 1e-8 / pre);
    return pre * (x > 0.0 ? v : -v);
}

/// massive_packet_current at many points. Integrates outward from 0 once,
/// accumulating panels between consecutive sorted points.
inline std::vector<double> massive_packet_current_sweep(std::span<const double> xs, double t, double a,
                                                        const PhysicalConstants& k)
{
    detail::require_positive(a, "massive_packet_current: a");
    detail::require_positive(k.m, "massive_packet_current: m");
    std::vector<double> out(xs.size(), 0.0);
    if (t == 0.0) return out;
    const cplx b(a, k.c * t);
    const double kappa = k.mc();
    auto f = [&](double y) { return detail::massive_current_integrand(y, b, kappa, k.hbar); };
    const double pre = detail::massive_current_prefactor(a, k);

    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return xs[i] < xs[j]; });

    // Positive side, ascending from 0.
    double acc = 0.0, from = 0.0;
    for (std::size_t i : order) {
        if (xs[i] <= 0.0) continue;
        acc += integrate_adaptive(f, from, xs[i], 1e-9 / pre);
        from = xs[i];
        out[i] = pre * acc;
    }
    // Negative side, descending from 0.
    acc = 0.0;
    from = 0.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const std::size_t i = *it;
        if (xs[i] >= 0.0) continue;
        acc += integrate_adaptive(f, xs[i], from, 1e-9 / pre);
        from = xs[i];
        out[i] = -pre * acc;
    }
    return out;
}

/// Initial momentum profile chi(p) = (lambda/(mu pi))^(1/4) exp(-lambda p^2/(2 mu))
/// of the linear-potential solution, without the characteristics phase.
inline double linear_potential_profile(double p, double lambda, double mu)
{
    detail::require_positive(lambda, "linear_potential: lambda");
    detail::require_positive(mu, "linear_potential: mu");
    return std::pow(lambda / (mu * std::numbers::pi), 0.25) * std::exp(-lambda * p * p / (2.0 * mu));
}

/// Momentum form of the linear-potential solution (m = 0, natural units):
///   phi(p, t) = (lambda/(mu pi))^(1/4) exp(i eps(p) p^2/(2 mu)) exp(-lambda (p + mu t)^2/(2 mu)).
inline cplx linear_potential_momentum(double p, double t, double lambda, double mu)
{
    detail::require_positive(lambda, "linear_potential: lambda");
    detail::require_positive(mu, "linear_potential: mu");
    const double q = p + mu * t;
    return std::pow(lambda / (mu * std::numbers::pi), 0.25) *
           std::polar(std::exp(-lambda * q * q / (2.0 * mu)), sign(p) * p * p / (2.0 * mu));
}

/// Position form of the same solution:
///   psi = 1/2 (lambda mu/pi)^(1/4) exp(-lambda mu t^2/2)
///         [erfcx(zeta_-)/sqrt(lambda + i) + erfcx(zeta_+)/sqrt(lambda - i)],
///   zeta_- = sqrt(mu/(2(lambda + i))) (-lambda t + i x),
///   zeta_+ = sqrt(mu/(2(lambda - i))) (lambda t - i x).
/// The Gaussian factor is merged into the reflected branch of erfcx so no
/// intermediate overflows.
inline cplx linear_potential_solution(double x, double t, double lambda, double mu)
{
    detail::require_positive(lambda, "linear_potential: lambda");
    detail::require_positive(mu, "linear_potential: mu");
    const double damp = lambda * mu * t * t / 2.0;
    auto branch = [damp](cplx zeta) {
        if (zeta.real() >= 0.0) return std::exp(-damp) * erfcx_complex(zeta);
        return 2.0 * std::exp(zeta * zeta - damp) - std::exp(-damp) * erfcx_complex(-zeta);
    };
    const cplx lp(lambda, 1.0), lm(lambda, -1.0);
    const cplx zm = std::sqrt(mu / (2.0 * lp)) * cplx(-lambda * t, x);
    const cplx zp = std::sqrt(mu / (2.0 * lm)) * cplx(lambda * t, -x);
    return 0.5 * std::pow(lambda * mu / std::numbers::pi, 0.25) *
           (branch(zm) / std::sqrt(lp) + branch(zp) / std::sqrt(lm));
}

/// <x>(t) = -exp(-lambda mu t^2)/sqrt(lambda mu pi) - t erf(sqrt(lambda mu) t).
inline double linear_potential_mean_x(double t, double lambda, double mu)
{
    detail::require_positive(lambda, "linear_potential: lambda");
    detail::require_positive(mu, "linear_potential: mu");
    const double s = std::sqrt(lambda * mu);
    return -std::exp(-s * s * t * t) / (s * std::sqrt(std::numbers::pi)) - t * erf_real(s * t);
}

/// <v>(t) = d<x>/dt = -erf(sqrt(lambda mu) t).
inline double linear_potential_mean_v(double t, double lambda, double mu)
{
    detail::require_positive(lambda, "linear_potential: lambda");
    detail::require_positive(mu, "linear_potential: mu");
    return -erf_real(std::sqrt(lambda * mu) * t);
}

/// Classical massless trajectory in V = mu x: x(t) = x0 - (c/mu) (|p0 - mu t| - |p0|).
inline double classical_lambda_trajectory(double t, double x0, double p0, double mu, double c = 1.0)
{
    detail::require_positive(mu, "classical_lambda_trajectory: mu");
    return x0 - c / mu * (std::abs(p0 - mu * t) - std::abs(p0));
}

/// Plane wave C exp(-i (E t - p.x) / hbar) with E = sqrt(m^2c^4 + p^2c^2).
template <std::size_t Dim>
struct PlaneWaveValue {
    cplx psi;
    double rho = 0.0;
    std::array<double, Dim> j{};
};

template <std::size_t Dim>
PlaneWaveValue<Dim> plane_wave(const std::array<double, Dim>& x, double t,
                               const std::array<double, Dim>& momentum, cplx amplitude,
                               const PhysicalConstants& k)
{
    double p2 = 0.0, px = 0.0;
    for (std::size_t i = 0; i < Dim; ++i) {
        p2 += momentum[i] * momentum[i];
        px += momentum[i] * x[i];
    }
    const double energy = k.c * std::sqrt(k.mc() * k.mc() + p2);
    PlaneWaveValue<Dim> out;
    out.psi = amplitude * std::polar(1.0, -(energy * t - px) / k.hbar);
    out.rho = std::norm(amplitude);
    for (std::size_t i = 0; i < Dim; ++i)
        out.j[i] = energy > 0.0 ? out.rho * k.c * k.c * momentum[i] / energy : 0.0;
    return out;
}

inline PlaneWaveValue<1> plane_wave(double x, double t, double momentum, cplx amplitude,
                                    const PhysicalConstants& k)
{
    return plane_wave<1>({x}, t, {momentum}, amplitude, k);
}

/// Radially symmetric massless packet in 3D (natural units), profile
/// sqrt(a^3/pi) exp(-a|p|):
///   psi = (2 pi)^(-3/2) sqrt(a^3/pi) 8 pi b / (r^2 + b^2)^2,  b = a + i t,
///   rho = 8 a^3 (a^2 + t^2) / (pi^2 q^4 (1 - z^2)^2),
///   j_r = 8 a^3 t r / (pi^2 q^4) [2/(1 - z^2)^2 - r^2 G(z)/q],
/// with q = r^2 + t^2 + a^2 and z = 2rt/q. j_r is the outward radial
/// component; the series form of G keeps r -> 0 and t -> 0 exact.
inline FieldValue massless_3d(double r, double t, double a)
{
    detail::require_positive(a, "massless_3d: a");
    if (r < 0.0) throw std::invalid_argument("massless_3d: r must be non-negative");
    const cplx b(a, t);
    const cplx d = r * r + b * b;
    FieldValue out;
    out.psi = std::pow(2.0 * std::numbers::pi, -1.5) * std::sqrt(a * a * a / std::numbers::pi) *
              8.0 * std::numbers::pi * b / (d * d);
    const double q = r * r + t * t + a * a;
    const double z = 2.0 * r * t / q;
    const double w = 1.0 - z * z;
    const double q4 = q * q * q * q;
    const double pi2 = std::numbers::pi * std::numbers::pi;
    out.rho = 8.0 * a * a * a * (a * a + t * t) / (pi2 * q4 * w * w);
    out.j = 8.0 * a * a * a * t * r / (pi2 * q4) * (2.0 / (w * w) - r * r * detail::massless_3d_g(z) / q);
    return out;
}

/// d rho/dt + (1/r^2) d(r^2 j)/dr of the closed forms, by eighth-order finite
/// differences. At r = 0 the divergence is 3 dj/dr.
inline double massless_3d_continuity_residual(double r, double t, double a)
{
    namespace fd = boost::math::differentiation;
    auto rho_at = [r, a](double s) { return massless_3d(r, s, a).rho; };
    // j_r extended as an odd function so the stencil may cross r = 0.
    auto j_odd = [t, a](double s) { return s < 0.0 ? -massless_3d(-s, t, a).j : massless_3d(s, t, a).j; };
    const double drho = fd::finite_difference_derivative<decltype(rho_at), double, 8>(rho_at, t);
    const double dj = fd::finite_difference_derivative<decltype(j_odd), double, 8>(j_odd, r);
    const double div = r == 0.0 ? 3.0 * dj : dj + 2.0 * massless_3d(r, t, a).j / r;
    return drho + div;
}

} // namespace salpeter
