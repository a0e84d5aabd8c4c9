#pragma once

#include <string>
#include <vector>

namespace salpeter {

/// Collects non-fatal warnings raised while computing. Operations accept an
/// optional pointer and append to it; a null pointer discards warnings.
struct Diagnostics {
    std::vector<std::string> warnings;

    void warn(std::string message) { warnings.push_back(std::move(message)); }
    std::size_t count() const noexcept { return warnings.size(); }
};

inline void warn(Diagnostics* diag, std::string message)
{
    if (diag) diag->warn(std::move(message));
}

} // namespace salpeter
