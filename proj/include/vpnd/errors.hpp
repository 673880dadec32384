#ifndef VPND_ERRORS_HPP
#define VPND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vpnd {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input text. Carries the 1-based line number when known.
struct ParseError : Error {
    ParseError(int line_no, const std::string& msg)
        : Error("line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
    explicit ParseError(const std::string& msg) : Error(msg), line(0) {}
    int line;
};

/// Structurally well-formed input violating a model invariant
/// (loop edge, negative cost, disconnected graph, ...).
struct ValidationError : Error {
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

/// An exponential-time oracle was asked for an instance above its size cap.
/// Oracles never truncate; they refuse.
struct SizeCapError : Error {
    explicit SizeCapError(const std::string& msg) : Error(msg) {}
};

}  // namespace vpnd

#endif  // VPND_ERRORS_HPP
