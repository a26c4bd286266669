#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace flatlo {

/// Base class for every error raised by the library.
///
/// `kind()` is a stable machine-readable tag used by the CLI error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Input rejected before any work is done.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message,
                             std::optional<std::size_t> aircraft = std::nullopt,
                             std::optional<double> bound = std::nullopt)
        : Error("validation", message), aircraft_(aircraft), bound_(bound) {}

    std::optional<std::size_t> aircraft() const noexcept { return aircraft_; }
    /// Numeric bound that was violated, when one applies (e.g. the maximum turn radius).
    std::optional<double> bound() const noexcept { return bound_; }

private:
    std::optional<std::size_t> aircraft_;
    std::optional<double> bound_;
};

class ParameterError : public Error {
public:
    explicit ParameterError(const std::string& message) : Error("parameter", message) {}
};

// Formation geometry that cannot be flown (negative diagonal leg, zero-length path).
class ConfigurationError : public Error {
public:
    explicit ConfigurationError(const std::string& message,
                                std::optional<std::size_t> aircraft = std::nullopt)
        : Error("configuration", message), aircraft_(aircraft) {}

    std::optional<std::size_t> aircraft() const noexcept { return aircraft_; }

private:
    std::optional<std::size_t> aircraft_;
};

class DegenerateSegmentError : public Error {
public:
    explicit DegenerateSegmentError(const std::string& message)
        : Error("degenerate_segment", message) {}
};

// State outside the domain of the equations of motion (V <= 0 or |gamma| >= pi/2).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& message) : Error("domain", message) {}
};

class IntegrationError : public Error {
public:
    IntegrationError(const std::string& message, double time_s)
        : Error("integration", message), time_s_(time_s) {}

    double time_s() const noexcept { return time_s_; }

private:
    double time_s_;
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& message, std::size_t aircraft, double time_s)
        : Error("divergence", message), aircraft_(aircraft), time_s_(time_s) {}

    std::size_t aircraft() const noexcept { return aircraft_; }
    double time_s() const noexcept { return time_s_; }

private:
    std::size_t aircraft_;
    double time_s_;
};

class AlignmentError : public Error {
public:
    explicit AlignmentError(const std::string& message) : Error("alignment", message) {}
};

} // namespace flatlo
