#pragma once

#include <stdexcept>
#include <string>

namespace pypl {

enum class ErrorKind {
    input = 1,         // malformed model or arguments
    precondition = 2,  // a theorem/operation hypothesis is not met
    internal = 3,      // invariant violation: a bug, never expected
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& code() const { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

inline Error input_error(std::string code, const std::string& what) {
    return Error(ErrorKind::input, std::move(code), what);
}
inline Error precondition_error(std::string code, const std::string& what) {
    return Error(ErrorKind::precondition, std::move(code), what);
}
inline Error internal_error(std::string code, const std::string& what) {
    return Error(ErrorKind::internal, std::move(code), what);
}

}  // namespace pypl
