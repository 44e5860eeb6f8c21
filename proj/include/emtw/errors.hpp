#ifndef EMTW_ERRORS_HPP
#define EMTW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace emtw {

// Invalid physical or solver configuration (maps to CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical procedure failed to converge (maps to CLI exit code 3).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace emtw

#endif
