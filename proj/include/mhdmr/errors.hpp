#pragma once

#include <stdexcept>
#include <string>

namespace mhdmr {

// Single exception type carrying a machine-checkable kind string
// ("NonPositivePressure", "SolverFailure", ...). Any throw aborts the
// current step; the CLI turns it into a structured error report.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(kind + ": " + message), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

[[noreturn]] inline void fail(const char* kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace mhdmr
