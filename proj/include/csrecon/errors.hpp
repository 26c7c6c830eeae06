#pragma once

#include <stdexcept>
#include <string>

namespace csrecon {

// Malformed or unreadable file content (mask/measurement/image formats).
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values or other numerical breakdown inside a solver run.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace csrecon
