#pragma once

// Special functions used by the kernels and closed-form solutions:
// Macdonald functions K_0, K_1, K_2 of complex argument, the complementary
// error function of complex argument, and the sign/step conventions.
//
// Everything here is a pure function: no tables, no caches.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "errors.hpp"

namespace salpeter {

using cplx = std::complex<double>;

/// sign(0) = 0.
constexpr double sign(double x) noexcept
{
    return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
}

/// Heaviside step with the symmetric midpoint value step(0) = 1/2.
constexpr double step(double p) noexcept
{
    return p > 0.0 ? 1.0 : (p < 0.0 ? 0.0 : 0.5);
}

inline double erf_real(double t) { return std::erf(t); }

inline bool is_finite(cplx z) noexcept
{
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

namespace detail {

inline constexpr double euler_gamma = 0.57721566490153286060651209;

struct BesselK01 {
    cplx k0;
    cplx k1;
};

// Ascending series about z = 0 (used for |z| <= 2).
inline BesselK01 bessel_k01_series(cplx z)
{
    const cplx y = 0.25 * z * z;
    const cplx log_half = std::log(0.5 * z);

    // K0 = -(ln(z/2) + gamma) I0 + sum_{k>=1} H_k y^k / (k!)^2
    cplx i0 = 1.0, harm_sum = 0.0;
    // K1 = 1/z + ln(z/2) I1 - (z/4) sum_{k>=0} (psi(k+1) + psi(k+2)) y^k / (k!(k+1)!)
    cplx i1_core = 1.0;                              // sum y^k/(k!(k+1)!)
    cplx psi_sum = -2.0 * euler_gamma + 1.0;         // k = 0 term
    cplx term0 = 1.0, term1 = 1.0;
    double harmonic = 0.0;
    for (int k = 1; k < 200; ++k) {
        term0 *= y / (double(k) * double(k));
        term1 *= y / (double(k) * double(k + 1));
        harmonic += 1.0 / k;
        i0 += term0;
        harm_sum += harmonic * term0;
        i1_core += term1;
        const double psi_pair = -2.0 * euler_gamma + 2.0 * harmonic + 1.0 / (k + 1);
        psi_sum += psi_pair * term1;
        if (std::abs(term0) < 1e-18 * std::abs(i0) && std::abs(term1) < 1e-18 * std::abs(i1_core))
            break;
    }
    BesselK01 out;
    out.k0 = -(log_half + euler_gamma) * i0 + harm_sum;
    const cplx i1 = 0.5 * z * i1_core;
    out.k1 = 1.0 / z + log_half * i1 - 0.25 * z * psi_sum;
    return out;
}

// Steed/Temme continued fraction for exp(z) K0(z), exp(z) K1(z); converges
// for Re z > 0 and is used for |z| > 2.
inline BesselK01 bessel_k01_scaled_cf(cplx z)
{
    constexpr int max_iter = 200000;
    constexpr double eps = 1e-16;
    const double a1 = 0.25;
    cplx b = 2.0 * (1.0 + z);
    cplx d = 1.0 / b;
    cplx h = d, delh = d;
    cplx q1 = 0.0, q2 = 1.0;
    cplx q = a1, c = a1;
    double a = -a1;
    cplx s = 1.0 + q * delh;
    int i = 2;
    for (; i <= max_iter; ++i) {
        a -= 2.0 * (i - 1);
        c = -a * c / double(i);
        const cplx qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const cplx dels = q * delh;
        s += dels;
        if (std::abs(dels) < eps * std::abs(s)) break;
    }
    if (i > max_iter)
        throw DomainError("bessel_k: continued fraction did not converge");
    h *= a1;
    BesselK01 out;
    out.k0 = std::sqrt(std::numbers::pi / (2.0 * z)) / s;
    out.k1 = out.k0 * (z + 0.5 - h) / z;
    return out;
}

inline void check_bessel_argument(int order, cplx z)
{
    if (order < 0 || order > 2)
        throw DomainError("bessel_k: order must be 0, 1 or 2");
    if (!is_finite(z)) throw DomainError("bessel_k: non-finite argument");
    if (!(z.real() > 0.0))
        throw DomainError("bessel_k: requires Re(z) > 0");
}

inline cplx select_order(int order, cplx z, const BesselK01& k)
{
    switch (order) {
    case 0: return k.k0;
    case 1: return k.k1;
    default: return k.k0 + 2.0 * k.k1 / z;
    }
}

} // namespace detail

/// exp(z) K_order(z). Never underflows for large |z|.
inline cplx bessel_k_scaled(int order, cplx z)
{
    detail::check_bessel_argument(order, z);
    if (std::abs(z) <= 2.0) {
        return std::exp(z) * detail::select_order(order, z, detail::bessel_k01_series(z));
    }
    return detail::select_order(order, z, detail::bessel_k01_scaled_cf(z));
}

/// Macdonald function K_order(z), order in {0, 1, 2}, Re z > 0.
///
/// Throws DomainError for Re z <= 0 and RangeError when the value is too
/// small to represent (Re z beyond ~745); bessel_k_scaled covers that range.
inline cplx bessel_k(int order, cplx z)
{
    detail::check_bessel_argument(order, z);
    cplx value;
    if (std::abs(z) <= 2.0) {
        value = detail::select_order(order, z, detail::bessel_k01_series(z));
    } else {
        const cplx scaled = detail::select_order(order, z, detail::bessel_k01_scaled_cf(z));
        value = scaled * std::exp(-z);
        if (value == cplx(0.0) && scaled != cplx(0.0))
            throw RangeError("bessel_k: result underflows, use bessel_k_scaled");
    }
    return value;
}

inline double bessel_k(int order, double z)
{
    if (!(z > 0.0)) throw DomainError("bessel_k: requires z > 0");
    return bessel_k(order, cplx(z, 0.0)).real();
}

namespace detail {

// Faddeeva function w(xi) = exp(-xi^2) erfc(-i xi) by the Laplace continued
// fraction; Im xi >= 0 and |xi| not small.
inline cplx faddeeva_cf(cplx xi)
{
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    cplx f = xi;
    cplx c = f, d = 0.0;
    int n = 1;
    for (; n < 100000; ++n) {
        const double an = -0.5 * n;
        d = xi + an * d;
        if (d == cplx(0.0)) d = tiny;
        c = xi + an / c;
        if (c == cplx(0.0)) c = tiny;
        d = 1.0 / d;
        const cplx delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    return cplx(0.0, 1.0 / std::sqrt(std::numbers::pi)) / f;
}

// erf(z) by its Maclaurin series; used where the series is well conditioned.
inline cplx erf_series(cplx z)
{
    const cplx z2 = z * z;
    cplx term = z, sum = z;
    for (int n = 1; n < 2000; ++n) {
        term *= -z2 / double(n);
        const cplx add = term / double(2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return 2.0 / std::sqrt(std::numbers::pi) * sum;
}

inline bool use_series(cplx z)
{
    const double r = std::abs(z);
    return r < 2.0 || (r < 6.0 && z.real() < 1.0);
}

} // namespace detail

/// Scaled complementary error function erfcx(z) = exp(z^2) erfc(z).
///
/// Overflow-free for Re z >= 0. For Re z < 0 the reflection term 2 exp(z^2)
/// may overflow; that raises RangeError.
inline cplx erfcx_complex(cplx z)
{
    if (!is_finite(z)) throw DomainError("erfcx: non-finite argument");
    if (z.real() < 0.0) {
        const cplx out = 2.0 * std::exp(z * z) - erfcx_complex(-z);
        if (!is_finite(out))
            throw RangeError("erfcx: exp(z^2) overflows for this Re z < 0");
        return out;
    }
    if (detail::use_series(z)) return std::exp(z * z) * (1.0 - detail::erf_series(z));
    return detail::faddeeva_cf(cplx(-z.imag(), z.real()));
}

/// Complementary error function of complex argument.
///
/// Throws RangeError when exp(-z^2) cannot be represented; erfcx_complex is
/// the scaled form that avoids it for Re z >= 0.
inline cplx erfc_complex(cplx z)
{
    if (!is_finite(z)) throw DomainError("erfc: non-finite argument");
    if (z.real() < 0.0) return 2.0 - erfc_complex(-z);
    if (detail::use_series(z)) return 1.0 - detail::erf_series(z);
    const cplx w = detail::faddeeva_cf(cplx(-z.imag(), z.real()));
    const cplx factor = std::exp(-z * z);
    if (!is_finite(factor))
        throw RangeError("erfc: exp(-z^2) overflows, use erfcx_complex");
    return factor * w;
}

} // namespace salpeter
