#pragma once

#include <stdexcept>
#include <string>

namespace cascadeho {

// d^2 != 0: the input data is inconsistent somewhere upstream.
class SquareNonzero : public std::runtime_error {
public:
  SquareNonzero(std::string source, std::string target, std::string value)
      : std::runtime_error("differential does not square to zero: entry (" + source + " -> " +
                           target + ") = " + value),
        source(std::move(source)), target(std::move(target)), value(std::move(value)) {}
  std::string source, target, value;
};

class ChainMapFailure : public std::runtime_error {
public:
  ChainMapFailure(std::string source, std::string target, std::string detail)
      : std::runtime_error("chain map identity fails at (" + source + " -> " + target + "): " +
                           detail),
        source(std::move(source)), target(std::move(target)) {}
  std::string source, target;
};

class NonDistinct : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class NonRegularValue : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class NonGenericConfiguration : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidComplex : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class UnknownFixture : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class InvalidScenario : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class SchemaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class Unsupported : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace cascadeho
