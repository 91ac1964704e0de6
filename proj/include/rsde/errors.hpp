#pragma once

#include <stdexcept>
#include <string>

namespace rsde {

// Error categories map one-to-one onto the CLI exit-code contract:
// 2 = I/O, 3 = domain violation, 4 = configuration, 5 = numeric failure.
enum class errc : int {
    io = 2,
    domain = 3,
    config = 4,
    numeric = 5,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }
    int exit_code() const { return static_cast<int>(code_); }

private:
    errc code_;
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(errc::io, what) {}
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(errc::domain, what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(errc::config, what) {}
};

struct NumericError : Error {
    explicit NumericError(const std::string& what) : Error(errc::numeric, what) {}
};

} // namespace rsde
