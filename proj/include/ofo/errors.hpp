#pragma once

#include <stdexcept>
#include <string>

namespace ofo {

/// Base class for all library errors.
class OfoError : public std::runtime_error {
public:
    explicit OfoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Network fails a structural invariant (no slack, disconnected, zero-impedance branch, ...).
class DegenerateNetworkError : public OfoError {
public:
    explicit DegenerateNetworkError(const std::string& msg) : OfoError(msg) {}
};

/// Newton-Raphson did not converge; carries the last mismatch norm.
class PlantDivergedError : public OfoError {
public:
    PlantDivergedError(const std::string& msg, double residual)
        : OfoError(msg), last_residual(residual) {}
    double last_residual;
};

/// Power-flow Jacobian too close to singular for sensitivity extraction.
class IllConditionedError : public OfoError {
public:
    explicit IllConditionedError(const std::string& msg) : OfoError(msg) {}
};

/// A caller-supplied parameter is outside its admissible range.
class ParameterError : public OfoError {
public:
    explicit ParameterError(const std::string& msg) : OfoError(msg) {}
};

/// Malformed input file (network or scenario JSON).
class ParseError : public OfoError {
public:
    explicit ParseError(const std::string& msg) : OfoError(msg) {}
};

} // namespace ofo
