#pragma once

#include <stdexcept>
#include <string>

namespace wreathcat {

// Error taxonomy mirrored by the CLI exit codes: parse errors (bad files,
// malformed inputs) exit 2, hypothesis violations exit 3, oracle divergence
// exit 4, tolerance breaches exit 5.

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct HypothesisError : std::runtime_error {
    explicit HypothesisError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ToleranceError : std::runtime_error {
    explicit ToleranceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct SizeError : std::runtime_error {
    explicit SizeError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace wreathcat
