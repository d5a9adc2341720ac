#pragma once

#include <stdexcept>
#include <string>

namespace graphnls {

// Failures are reported by exception. The kind drives the CLI exit code:
// input problems (bad documents, bad arguments) versus numerical failures.
enum class ErrorKind {
  kParse,
  kInvalidGraph,
  kInvalidArgument,
  kNumerical,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline bool is_input_error(const Error& e) noexcept { return e.kind() != ErrorKind::kNumerical; }

}  // namespace graphnls
