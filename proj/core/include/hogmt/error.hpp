#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hogmt {

// Runtime error carrying a stable machine-readable code. The CLI prints
// these as "error_code:<code>: <message>" on stderr so scripts can match
// on the code rather than the prose.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
  throw Error(std::move(code), message);
}

}  // namespace hogmt
