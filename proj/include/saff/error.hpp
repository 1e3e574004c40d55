#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace saff {

// Machine-readable failure classes. Values mirror saff_status in saff.h.
enum class ErrorCategory {
  validation = 1,
  io = 2,
  config = 3,
  dimension = 4,
  numeric = 5,
  invalid_argument = 6,
};

std::string_view category_name(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory category, const std::string& message) {
  throw Error(category, message);
}

}  // namespace saff
