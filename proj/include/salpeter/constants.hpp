#pragma once

#include <cmath>
#include <stdexcept>

namespace salpeter {

/// hbar, c and particle mass. Defaults are natural units with m = 0.
struct PhysicalConstants {
    double hbar = 1.0;
    double c = 1.0;
    double m = 0.0;

    static PhysicalConstants natural(double mass = 0.0) { return {1.0, 1.0, mass}; }

    void validate() const
    {
        if (!(hbar > 0.0) || !std::isfinite(hbar))
            throw std::invalid_argument("PhysicalConstants: hbar must be positive");
        if (!(c > 0.0) || !std::isfinite(c))
            throw std::invalid_argument("PhysicalConstants: c must be positive");
        if (!(m >= 0.0) || !std::isfinite(m))
            throw std::invalid_argument("PhysicalConstants: m must be non-negative");
    }

    bool massless() const noexcept { return m == 0.0; }
    /// m c, the momentum scale of the symbol.
    double mc() const noexcept { return m * c; }
    /// hbar / (m c); infinite for m = 0.
    double compton_length() const noexcept { return hbar / (m * c); }
};

} // namespace salpeter
