#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pmelt {

/// Precondition on a numeric argument or shape was violated.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed binary input. `offset` is the byte position where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Requested work cannot be satisfied by the supplied inputs.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pmelt
