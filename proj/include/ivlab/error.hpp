#pragma once

#include <stdexcept>
#include <string>

namespace ivlab {

/// Broad failure categories; the CLI maps each to a distinct exit code.
enum class ErrorKind {
    usage,
    missing_file,
    schema,
    computation,
    network,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace ivlab
