#pragma once

#include <stdexcept>
#include <string>

namespace lindyn {

// Caller handed in something outside an operation's stated domain.
struct InvalidInput : std::runtime_error {
  explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

// A finite-rank update (or an expression containing one) is singular.
struct NotInvertible : std::runtime_error {
  explicit NotInvertible(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem or parse failure on an input/output file.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lindyn
