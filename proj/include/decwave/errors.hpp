#ifndef DECWAVE_ERRORS_HPP
#define DECWAVE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace decwave {

// Process exit codes used by the command-line driver.
enum class ExitCode : int {
    success = 0,
    config_error = 1,
    mesh_error = 2,
    overflow = 3,
    solver_failure = 4,
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept = 0;
};

class ConfigError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::config_error; }
};

/// Malformed input file, non-manifold or degenerate geometry, or a mesh the
/// circumcentric scheme cannot handle (non-positive dual cell).
class MeshError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::mesh_error; }
};

/// A field value left the representable range during time stepping.
class OverflowError : public Error {
public:
    OverflowError(std::size_t time_index, std::size_t vertex, double value);

    std::size_t time_index() const noexcept { return time_index_; }
    std::size_t vertex() const noexcept { return vertex_; }
    ExitCode exit_code() const noexcept override { return ExitCode::overflow; }

private:
    std::size_t time_index_;
    std::size_t vertex_;
};

/// Iterative method failed, or a linear system is singular/incompatible.
class SolverError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::solver_failure; }
};

/// Argument violates an operation's precondition (length mismatch, bad range).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace decwave

#endif
