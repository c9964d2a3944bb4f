#pragma once

#include <stdexcept>
#include <string>

namespace ph {

// Raised for malformed or rejected user input (files, formats, shapes).
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an internal consistency check fails on data that parsed fine.
struct invariant_error : std::runtime_error {
    explicit invariant_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ph
