#pragma once

// Uniform periodic grids, their momentum ladders, and the unitary discrete
// Fourier pair
//
//   phi(p_n) = dx / sqrt(2 pi hbar) * sum_j psi(x_j) exp(-i p_n x_j / hbar)
//   psi(x_j) = dp / sqrt(2 pi hbar) * sum_n phi(p_n) exp(+i p_n x_j / hbar)
//
// with dp = 2 pi hbar / L. Both directions carry (2 pi hbar)^(-1/2), so
// sum |phi|^2 dp = sum |psi|^2 dx exactly. In natural units this matches the
// symmetric continuum convention used for the closed-form solutions; the
// asymmetric 1/(sqrt(2 pi) hbar) vs 1/sqrt(2 pi) pair differs only by a
// factor sqrt(hbar) on the momentum side.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "constants.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "specfun.hpp"

namespace salpeter {

/// N uniform nodes x_j = x0 + j dx on the periodic box [x0, x0 + L).
///
/// Momentum samples are stored in FFT order: index n carries the integer
/// wavenumber n for n <= N/2 and n - N above, so the Nyquist mode sits at
/// +p_max = pi hbar N / L.
class Grid1D {
public:
    Grid1D() = default;

    Grid1D(std::size_t n, double length, double x0, double hbar = 1.0)
        : n_(n), length_(length), x0_(x0), hbar_(hbar)
    {
        if (n < 8 || (n & (n - 1)) != 0)
            throw std::invalid_argument("Grid1D: N must be a power of two >= 8, got " +
                                        std::to_string(n));
        if (!(length > 0.0) || !std::isfinite(length))
            throw std::invalid_argument("Grid1D: L must be positive");
        if (!std::isfinite(x0)) throw std::invalid_argument("Grid1D: x0 must be finite");
        if (!(hbar > 0.0)) throw std::invalid_argument("Grid1D: hbar must be positive");
    }

    std::size_t size() const noexcept { return n_; }
    double length() const noexcept { return length_; }
    double left() const noexcept { return x0_; }
    double hbar() const noexcept { return hbar_; }
    double dx() const noexcept { return length_ / double(n_); }
    double dp() const noexcept { return 2.0 * std::numbers::pi * hbar_ / length_; }
    double p_max() const noexcept { return std::numbers::pi * hbar_ * double(n_) / length_; }

    double x(std::size_t j) const noexcept { return x0_ + double(j) * dx(); }

    /// Integer wavenumber of FFT slot n, in (-N/2, N/2].
    long wavenumber(std::size_t n) const noexcept
    {
        return n <= n_ / 2 ? long(n) : long(n) - long(n_);
    }

    double p(std::size_t n) const noexcept { return double(wavenumber(n)) * dp(); }

    /// FFT slot holding integer wavenumber w; w must lie in (-N/2, N/2].
    std::size_t slot(long w) const noexcept
    {
        return w >= 0 ? std::size_t(w) : std::size_t(w + long(n_));
    }

    std::vector<double> positions() const
    {
        std::vector<double> out(n_);
        for (std::size_t j = 0; j < n_; ++j) out[j] = x(j);
        return out;
    }

    std::vector<double> momenta() const
    {
        std::vector<double> out(n_);
        for (std::size_t k = 0; k < n_; ++k) out[k] = p(k);
        return out;
    }

    bool operator==(const Grid1D&) const = default;

private:
    std::size_t n_ = 0;
    double length_ = 0.0;
    double x0_ = 0.0;
    double hbar_ = 1.0;
};

inline Grid1D make_grid(std::size_t n, double length, double x0, double hbar = 1.0)
{
    return Grid1D(n, length, x0, hbar);
}

/// Position-space samples at a fixed time (units length^-1/2).
struct WaveFunction {
    Grid1D grid;
    std::vector<cplx> samples;
    double time = 0.0;
};

/// Momentum-ladder samples in FFT order (units momentum^-1/2).
struct MomentumWaveFunction {
    Grid1D grid;
    std::vector<cplx> samples;
    double time = 0.0;
};

template <class F>
WaveFunction sample(const Grid1D& grid, F&& f, double time = 0.0)
{
    WaveFunction out{grid, std::vector<cplx>(grid.size()), time};
    for (std::size_t j = 0; j < grid.size(); ++j) out.samples[j] = cplx(f(grid.x(j)));
    return out;
}

template <class F>
MomentumWaveFunction sample_momentum(const Grid1D& grid, F&& f, double time = 0.0)
{
    MomentumWaveFunction out{grid, std::vector<cplx>(grid.size()), time};
    for (std::size_t n = 0; n < grid.size(); ++n) out.samples[n] = cplx(f(grid.p(n)));
    return out;
}

namespace detail {

inline std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

} // namespace detail

/// Owns FFTW plans and an aligned work buffer for one transform length.
/// Transforms are unnormalized. One instance must not be shared between
/// threads; create one per thread instead.
class Fft {
public:
    explicit Fft(std::size_t n) : n_(n)
    {
        buffer_ = fftw_alloc_complex(n);
        if (!buffer_) throw std::bad_alloc();
        std::lock_guard lock(detail::fftw_planner_mutex());
        forward_ = fftw_plan_dft_1d(int(n), buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
        backward_ = fftw_plan_dft_1d(int(n), buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    ~Fft()
    {
        std::lock_guard lock(detail::fftw_planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
        fftw_free(buffer_);
    }

    std::size_t size() const noexcept { return n_; }

    /// In place: data_n <- sum_j data_j exp(-2 pi i n j / N).
    void forward(std::span<cplx> data) { run(forward_, data); }
    /// In place: data_j <- sum_n data_n exp(+2 pi i n j / N).
    void backward(std::span<cplx> data) { run(backward_, data); }

private:
    void run(fftw_plan plan, std::span<cplx> data)
    {
        if (data.size() != n_) throw std::invalid_argument("Fft: length mismatch");
        auto* buf = reinterpret_cast<cplx*>(buffer_);
        std::copy(data.begin(), data.end(), buf);
        fftw_execute(plan);
        std::copy(buf, buf + n_, data.begin());
    }

    std::size_t n_;
    fftw_complex* buffer_ = nullptr;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
};

inline MomentumWaveFunction forward_transform(const WaveFunction& psi, Fft& fft)
{
    const Grid1D& g = psi.grid;
    MomentumWaveFunction out{g, psi.samples, psi.time};
    fft.forward(out.samples);
    const double scale = g.dx() / std::sqrt(2.0 * std::numbers::pi * g.hbar());
    for (std::size_t n = 0; n < g.size(); ++n)
        out.samples[n] *= scale * std::polar(1.0, -g.p(n) * g.left() / g.hbar());
    return out;
}

inline WaveFunction inverse_transform(const MomentumWaveFunction& phi, Fft& fft)
{
    const Grid1D& g = phi.grid;
    WaveFunction out{g, phi.samples, phi.time};
    const double scale = g.dp() / std::sqrt(2.0 * std::numbers::pi * g.hbar());
    for (std::size_t n = 0; n < g.size(); ++n)
        out.samples[n] *= scale * std::polar(1.0, g.p(n) * g.left() / g.hbar());
    fft.backward(out.samples);
    return out;
}

inline MomentumWaveFunction forward_transform(const WaveFunction& psi)
{
    Fft fft(psi.grid.size());
    return forward_transform(psi, fft);
}

inline WaveFunction inverse_transform(const MomentumWaveFunction& phi)
{
    Fft fft(phi.grid.size());
    return inverse_transform(phi, fft);
}

inline double norm(const WaveFunction& psi)
{
    double s = 0.0;
    for (const cplx& v : psi.samples) s += std::norm(v);
    return std::sqrt(s * psi.grid.dx());
}

inline double norm(const MomentumWaveFunction& phi)
{
    double s = 0.0;
    for (const cplx& v : phi.samples) s += std::norm(v);
    return std::sqrt(s * phi.grid.dp());
}

template <class State>
State normalize(State state)
{
    const double nrm = norm(state);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
        throw std::invalid_argument("normalize: zero or non-finite state");
    for (cplx& v : state.samples) v /= nrm;
    return state;
}

/// <a|b> with the grid measure.
inline cplx inner_product(const WaveFunction& a, const WaveFunction& b)
{
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.samples.size(); ++j) s += std::conj(a.samples[j]) * b.samples[j];
    return s * a.grid.dx();
}

/// d^order psi / dx^order by multiplication with (i p / hbar)^order.
inline WaveFunction spectral_derivative(const WaveFunction& psi, int order, Fft& fft)
{
    MomentumWaveFunction phi = forward_transform(psi, fft);
    const Grid1D& g = psi.grid;
    for (std::size_t n = 0; n < g.size(); ++n)
        phi.samples[n] *= std::pow(cplx(0.0, g.p(n) / g.hbar()), order);
    return inverse_transform(phi, fft);
}

inline WaveFunction spectral_derivative(const WaveFunction& psi, int order)
{
    Fft fft(psi.grid.size());
    return spectral_derivative(psi, order, fft);
}

/// Largest edge amplitude relative to the peak amplitude.
inline double boundary_ratio(const WaveFunction& psi)
{
    double peak = 0.0;
    for (const cplx& v : psi.samples) peak = std::max(peak, std::abs(v));
    if (peak == 0.0) return 0.0;
    const double edge = std::max(std::abs(psi.samples.front()), std::abs(psi.samples.back()));
    return edge / peak;
}

/// Warns when the periodic box is too small for the packet.
inline bool check_boundary(const WaveFunction& psi, Diagnostics* diag, double threshold = 1e-8)
{
    const double ratio = boundary_ratio(psi);
    if (ratio > threshold) {
        warn(diag, "boundary contamination at t=" + format_number(psi.time) +
                       ": edge/peak amplitude " + format_number(ratio) + " exceeds " +
                       format_number(threshold));
        return false;
    }
    return true;
}

/// Uniform radial nodes r_k = k dr on [0, r_max] with trapezoid weights for
/// the measure 4 pi r^2 dr. The r = 0 node carries zero weight.
class RadialGrid {
public:
    RadialGrid(std::size_t n, double r_max) : n_(n), r_max_(r_max)
    {
        if (n < 2) throw std::invalid_argument("RadialGrid: need at least two nodes");
        if (!(r_max > 0.0)) throw std::invalid_argument("RadialGrid: r_max must be positive");
    }

    std::size_t size() const noexcept { return n_; }
    double r_max() const noexcept { return r_max_; }
    double dr() const noexcept { return r_max_ / double(n_ - 1); }
    double r(std::size_t k) const noexcept { return double(k) * dr(); }

    double weight(std::size_t k) const noexcept
    {
        const double rk = r(k);
        const double w = 4.0 * std::numbers::pi * rk * rk * dr();
        return k + 1 == n_ ? 0.5 * w : w;
    }

    /// Sum of weight(k) * values[k].
    double integrate(std::span<const double> values) const
    {
        if (values.size() != n_) throw std::invalid_argument("RadialGrid: size mismatch");
        double s = 0.0;
        for (std::size_t k = 0; k < n_; ++k) s += weight(k) * values[k];
        return s;
    }

    template <class F>
    double integrate_function(F&& f) const
    {
        double s = 0.0;
        for (std::size_t k = 1; k < n_; ++k) s += weight(k) * f(r(k));
        return s;
    }

private:
    std::size_t n_;
    double r_max_;
};

} // namespace salpeter
