#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace carleman {

// Failure categories. Each maps onto one CLI exit class (see cli.hpp).
enum class ErrorKind {
    domain,              // argument outside the operation's domain
    ambiguity,           // point on the cut without a side flag
    edge,                // too close to the spectral edges 0 or pi
    singular,            // near-singular linear system (lambda in the singular set)
    grid_too_small,      // window cannot hold the data or the eigenvector
    truncation,          // non-decaying tails on a finite window
    precondition,        // input violates a documented precondition
    theory_inapplicable, // e.g. indefinite V for Birman-Schwinger counting
    divergence,          // integral or norm diverges
    shape,               // grid mismatch between operands
    invariant,           // a structural invariant of an input is violated
    validation,          // malformed configuration
    io,                  // file system / parse failures
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
    if (!condition) fail(kind, message);
}

} // namespace carleman
