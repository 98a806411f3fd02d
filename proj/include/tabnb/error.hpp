#pragma once

#include <stdexcept>
#include <string>

namespace tabnb {

// Error categories surfaced by the CLI; the numeric value doubles as the
// process exit code.
enum class ErrorCategory : int {
    usage = 1,
    input = 2,
    undefined = 3,
    audit = 4,
    fit = 5,
};

const char* category_name(ErrorCategory category);

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message)
        : std::runtime_error(message), category_(category) {}

    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

class UsageError : public Error {
public:
    explicit UsageError(const std::string& message) : Error(ErrorCategory::usage, message) {}
};

class InputError : public Error {
public:
    explicit InputError(const std::string& message) : Error(ErrorCategory::input, message) {}
};

class FitError : public Error {
public:
    explicit FitError(const std::string& message) : Error(ErrorCategory::fit, message) {}
};

}  // namespace tabnb
