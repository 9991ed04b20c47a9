#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qnr {

enum class ErrorKind {
  NotHermitian,
  DimensionMismatch,
  NotUnit,
  DimTooSmall,
  QOutOfRange,
  NonFinite,
  InvalidInput,
  UnknownName,
  Unbounded,
  PredicateUnmet,
  ArityMismatch,
  DivisionDomain,
  UnknownFigure,
  GenerationFailed,
  InvalidConfig,
  Io,
};

std::string_view to_string(ErrorKind kind);

// Domain error. The CLI maps every Error to exit code 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qnr
