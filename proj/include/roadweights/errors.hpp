#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace roadweights {

enum class ErrorCode {
  kIndex,
  kContract,
  kConvergence,
  kMalformedRow,
  kDanglingReference,
  kScheduleNotPartition,
  kIo,
};

const char* to_string(ErrorCode code);

// Process exit status used by the command-line tool for each error class:
// 2 for input validation, 3 for solver non-convergence, 4 for I/O.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations);

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// One violating input row.
struct Diagnostic {
  ErrorCode code;
  std::string file;
  std::size_t line = 0;
  std::string reason;

  std::string format() const;
};

// Raised by the loaders after collecting every violating row of a file.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic>& diagnostics() const noexcept {
    return diagnostics_;
  }

 private:
  std::vector<Diagnostic> diagnostics_;
};

[[noreturn]] void throw_contract(const std::string& message);
[[noreturn]] void throw_index(const std::string& message);

}  // namespace roadweights
