#include "roadweights/errors.hpp"

#include <sstream>

namespace roadweights {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kIndex:
      return "index";
    case ErrorCode::kContract:
      return "contract";
    case ErrorCode::kConvergence:
      return "convergence";
    case ErrorCode::kMalformedRow:
      return "malformed-row";
    case ErrorCode::kDanglingReference:
      return "dangling-reference";
    case ErrorCode::kScheduleNotPartition:
      return "schedule-not-partition";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConvergence:
      return 3;
    case ErrorCode::kIo:
      return 4;
    default:
      return 2;
  }
}

ConvergenceError::ConvergenceError(const std::string& what, double residual,
                                   int iterations)
    : Error(ErrorCode::kConvergence,
            what + " did not converge after " + std::to_string(iterations) +
                " iterations (residual " + std::to_string(residual) + ")"),
      residual_(residual),
      iterations_(iterations) {}

std::string Diagnostic::format() const {
  std::ostringstream out;
  out << file << ":" << line << ": " << to_string(code) << ": " << reason;
  return out.str();
}

namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
  std::ostringstream out;
  out << diagnostics.size() << " invalid input row(s)";
  for (const auto& d : diagnostics) out << "\n  " << d.format();
  return out.str();
}

ErrorCode first_code(const std::vector<Diagnostic>& diagnostics) {
  return diagnostics.empty() ? ErrorCode::kMalformedRow
                             : diagnostics.front().code;
}

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : Error(first_code(diagnostics), summarize(diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

void throw_contract(const std::string& message) {
  throw Error(ErrorCode::kContract, message);
}

void throw_index(const std::string& message) {
  throw Error(ErrorCode::kIndex, message);
}

}  // namespace roadweights
