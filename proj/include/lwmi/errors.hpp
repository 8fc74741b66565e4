#pragma once

#include <stdexcept>
#include <string>

namespace lwmi {

// Base for everything this library throws on purpose.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or invalid input: bad JSON, unknown variables, rejected
// operators, negative weights, inconsistent declarations.
struct input_error : error {
    explicit input_error(const std::string& what) : error(what) {}
};

// A structural cap was exceeded (too many variables, atoms, candidate
// vertex subsets, grid cells). The request is well-formed but too big.
struct capacity_error : error {
    explicit capacity_error(const std::string& what) : error(what) {}
};

// The requested backend cannot handle this problem class (e.g. exact
// integration of a nonlinear-atom formula or a too-high dimension).
struct backend_unavailable : error {
    explicit backend_unavailable(const std::string& what) : error(what) {}
};

// A density evaluated negative at a sampled point.
struct nonnegativity_error : input_error {
    explicit nonnegativity_error(const std::string& what) : input_error(what) {}
};

} // namespace lwmi
