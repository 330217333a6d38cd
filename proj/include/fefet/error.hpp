#pragma once

#include <stdexcept>
#include <string>

namespace fefet {

// Error categories map one-to-one onto CLI exit codes.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace fefet
