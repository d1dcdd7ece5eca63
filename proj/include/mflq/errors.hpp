#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mflq {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed inputs: inconsistent shapes, non-symmetric cost matrices, bad grids.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// A solver precondition on the coefficient data does not hold.
class AssumptionError : public Error {
public:
    using Error::Error;
};

/// A matrix that must be inverted is numerically singular.
class SingularityError : public Error {
public:
    SingularityError(const std::string& what, int node) : Error(what), node(node) {}
    int node = -1;
};

/// Simulated state became non-finite.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, int node) : Error(what), node(node) {}
    int node = -1;
};

/// Argument outside its admissible range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Unsupported request (e.g. a closed form that does not exist for the inputs).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Config/schema problems; carries one message per offending key.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::vector<std::string> issues = {})
        : Error(what), issues(std::move(issues)) {}
    std::vector<std::string> issues;
};

}  // namespace mflq
