#pragma once

#include <stdexcept>
#include <string>

namespace treetoric {

// Raised for malformed input documents: bad JSON shape, unknown identifiers,
// structural violations (two parents, unreachable vertices), bad flag values.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an operation is asked of an object outside its domain: a basis
// construction on an unbalanced tree, an oracle enumeration over the size
// guard, a reduction against an inconsistently marked basis.
struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an internal invariant fails; indicates a bug, not bad input.
struct internal_error : std::logic_error {
  explicit internal_error(const std::string& what) : std::logic_error(what) {}
};

}  // namespace treetoric
