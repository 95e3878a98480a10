#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace permrd {

enum class ErrorKind {
  empty_input,
  duplicate_value,
  value_out_of_range,
  size_mismatch,
  degenerate_size,
  invalid_inversion_vector,
  invalid_insertion_vector,
  invalid_parameter,
  unsupported_combination,
  parse_error,
  limit_exceeded,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so callers (and tests)
// can tell validation failures apart without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace permrd
