#pragma once

#include <stdexcept>
#include <string>

namespace sgo {

// Bad user input: malformed config, unknown keys, out-of-range parameters.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A computation could not be completed: no bracketed root, pole-dense
// domain, quadrature grid too coarse. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class DomainError : public NumericalError {
 public:
  explicit DomainError(const std::string& what) : NumericalError(what) {}
};

class PoleError : public NumericalError {
 public:
  explicit PoleError(const std::string& what) : NumericalError(what) {}
};

class NoRootError : public NumericalError {
 public:
  explicit NoRootError(const std::string& what) : NumericalError(what) {}
};

class OverflowError : public NumericalError {
 public:
  explicit OverflowError(const std::string& what) : NumericalError(what) {}
};

class NotImplementedError : public std::logic_error {
 public:
  explicit NotImplementedError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace sgo
