#pragma once

#include <stdexcept>
#include <string>

namespace metricdtw {

// Bad numeric content, broken invariants, dimension mismatches.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input files; message names file and line where possible.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace metricdtw
