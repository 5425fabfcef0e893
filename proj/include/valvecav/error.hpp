#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace valvecav {

/// Process exit codes used by the CLI.
enum class ExitCode : int {
  kOk = 0,
  kConfig = 2,
  kData = 3,
  kNumeric = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

/// Bad configuration, bad arguments, malformed manifests.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ExitCode::kConfig, what) {}
};

/// Inputs that violate a data contract (missing files, schema mismatch, ...).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(ExitCode::kData, what) {}
};

/// Non-finite values or invalid numeric preconditions.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ExitCode::kNumeric, what) {}
};

/// Collected non-fatal diagnostics. Operations append here instead of printing.
using Warnings = std::vector<std::string>;

void log_warning(const std::string& message);

}  // namespace valvecav
