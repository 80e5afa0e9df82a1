// Error taxonomy shared by all bosonet modules.
//
// ValidationError      — an input violates a documented precondition.
// UnsupportedConfigError — input is well formed but describes a physical
//                        configuration the model does not define.
// IntegrationError     — the time stepper detected an instability.
// FitError             — a diagnostic fit did not converge / is not exponential.
// ConfigError          — a CLI config file failed to parse or validate;
//                        carries the offending field path.

#pragma once

#include <stdexcept>
#include <string>

namespace bosonet {

class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

class UnsupportedConfigError : public std::invalid_argument {
public:
    explicit UnsupportedConfigError(const std::string& what) : std::invalid_argument(what) {}
};

class IntegrationError : public std::runtime_error {
public:
    explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, std::string field = {})
        : std::runtime_error(field.empty() ? what : what + " (field: " + field + ")"),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace bosonet
