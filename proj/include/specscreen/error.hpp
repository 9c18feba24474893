#pragma once

#include <stdexcept>
#include <string>

namespace specscreen {

/// Broad failure category. The CLI maps these onto exit codes.
enum class ErrorKind {
    Config,   ///< invalid parameters or usage
    Data,     ///< unreadable, malformed or degenerate input data
    Numeric,  ///< a numeric procedure left its domain of validity
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail_config(const std::string& what) { throw Error(ErrorKind::Config, what); }
[[noreturn]] inline void fail_data(const std::string& what) { throw Error(ErrorKind::Data, what); }
[[noreturn]] inline void fail_numeric(const std::string& what) { throw Error(ErrorKind::Numeric, what); }

}  // namespace specscreen
