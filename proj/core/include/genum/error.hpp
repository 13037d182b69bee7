#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace genum {

enum class ErrorCode {
  EmptyInput,
  NonFiniteValue,
  EmptyRange,
  NonPositiveInteger,
  InvalidArguments,
  InconsistentCounts,
  InconsistentWidths,
  IndexOutOfRange,
  NonPositiveNullCost,
  DegenerateDomain,
  InvalidRange,
  NonFiniteInput,
  OutOfDomain,
  NotPich,
  UnsplittableDegenerate,
  InvalidSpec,
  InvalidN,
  PropagatedBuildError,
  ParseError,
};

const char* to_string(ErrorCode code);

/// Library exception. Every failure raised by genum carries a code so callers
/// (the CLI in particular) can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(what), code_(code), index_(index) {}

  ErrorCode code() const noexcept { return code_; }

  /// Offending element position, when the error refers to one.
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace genum
