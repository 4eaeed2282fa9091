#pragma once

#include <stdexcept>
#include <string>

namespace mecsim {

/// Status codes shared by the C++ exceptions and the C API.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kInvalidConfig = 2,
  kIo = 3,
  kParse = 4,
  kContract = 5,
  kInfeasible = 6,
  kConsistency = 7,
  kInternal = 8,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Invalid configuration; `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& why)
      : Error(ErrorCode::kInvalidConfig, "invalid config field '" + field + "': " + why),
        field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// A caller broke a documented precondition.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(ErrorCode::kContract, what) {}
};

/// Offloading was requested over a link or allocation that cannot carry it.
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what) : Error(ErrorCode::kInfeasible, what) {}
};

/// An internal invariant (e.g. the per-slot drift bound) failed.
class ConsistencyError : public Error {
 public:
  explicit ConsistencyError(const std::string& what) : Error(ErrorCode::kConsistency, what) {}
};

class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& why)
      : Error(ErrorCode::kIo, path + ": " + why) {}
};

}  // namespace mecsim
