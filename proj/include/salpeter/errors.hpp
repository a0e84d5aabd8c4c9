#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace salpeter {

/// Short scientific rendering for messages ("1.23e-09").
inline std::string format_number(double v)
{
    std::ostringstream os;
    os.precision(3);
    os << v;
    return os.str();
}

/// Argument outside the domain of a special function or closed form.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Result not representable in double precision; the message names the
/// scaled variant to call instead.
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Kernel evaluated at a coincident point, or a kernel quadrature whose
/// singular cell is under-resolved.
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& what, double ratio = 0.0)
        : std::runtime_error(what), ratio_(ratio) {}
    /// Offending resolution ratio (m c dx / hbar) when applicable.
    double ratio() const noexcept { return ratio_; }

private:
    double ratio_;
};

/// Shifted momentum profile leaves the discrete momentum ladder.
class AliasingError : public std::runtime_error {
public:
    AliasingError(const std::string& what, double shift)
        : std::runtime_error(what), shift_(shift) {}
    double shift() const noexcept { return shift_; }

private:
    double shift_;
};

class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved_tolerance() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// Scenario configuration problem. Carries the offending line (0 when the
/// problem is not tied to a line) and field name.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string field, int line = 0)
        : std::runtime_error(what), field_(std::move(field)), line_(line) {}
    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

} // namespace salpeter
