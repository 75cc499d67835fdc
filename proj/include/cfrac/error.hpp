#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cfrac {

enum class ErrorKind {
    InvalidArgument,
    UnsupportedExactOp,
    NotInvertible,
    PropagationFailure,
    SingularNetwork,
    UnsupportedLumping,
    Assembly,
    Divergence,
    IncompatibleSignals,
    UndefinedAngle,
    Parse,
    Io,
};

/// Single exception type for the library; `kind()` lets front ends map
/// failures to exit codes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Non-fatal notes collected by operations that degrade gracefully
/// (no-op truncation, extrapolated lookups, vacuous checks).
struct Diagnostics {
    std::vector<std::string> warnings;

    void warn(std::string msg) { warnings.push_back(std::move(msg)); }
    [[nodiscard]] bool empty() const noexcept { return warnings.empty(); }
};

}  // namespace cfrac
