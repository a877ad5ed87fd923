#pragma once

#include <stdexcept>
#include <string>

namespace latsphere {

// A caller-supplied value violates an operation's precondition.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// An explicit construction would exceed its configured size cap.
class CapExceeded : public std::runtime_error {
public:
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

} // namespace latsphere
