#pragma once

#include <stdexcept>
#include <string>

namespace cegbma {

// Failure categories; the numeric values double as CLI exit codes.
enum class ErrorKind : int {
    InvalidArgument = 1,
    InvalidInput = 2,
    Validation = 3,
    Capacity = 4,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace cegbma
