#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace edlf {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidInputError : Error {
    using Error::Error;
};

// H(a;r) fell below the floor; N undefined at that radius.
struct FrequencyUndefinedError : Error {
    using Error::Error;
};

// Zero L^2 mass on the blow-up ball.
struct DegenerateBlowupError : Error {
    using Error::Error;
};

// Loop sample dipped below the s-floor; homotopy class undefined.
struct ClassUndefinedError : Error {
    using Error::Error;
};

// Consecutive loop samples nearly perpendicular; sign product ambiguous.
struct AmbiguityError : Error {
    using Error::Error;
};

struct DegenerateFieldError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// Collected validation failures from config parsing, one entry per problem.
struct ConfigError : Error {
    std::vector<std::string> items;
    explicit ConfigError(std::vector<std::string> errs)
        : Error(errs.empty() ? "config error" : errs.front()), items(std::move(errs)) {}
};

}  // namespace edlf
