#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gaitview {

enum class Errc {
  DegenerateSignal,
  ConstantSignal,
  NonFiniteValue,
  ParseError,
  SchemaError,
  DuplicateError,
  GapTooLarge,
  InvalidFilterSpec,
  SignalTooShort,
  MissingLandmark,
  NoWalkingDirection,
  DegenerateGeometry,
  LengthMismatch,
  AllZeroDifferences,
  EmptySample,
  UnsupportedSampleSize,
  ConstantSample,
  UnpairedSubject,
  DegenerateMatrix,
  DimensionMismatch,
  BehindCamera,
  IoError,
  NotAnalyzed,
  InvalidArgument,
};

std::string_view errc_name(Errc code) noexcept;

/// Where in a pipeline an error happened. Every field is optional; the
/// message is rebuilt from whatever is set.
struct ErrorContext {
  std::optional<std::string> stage;
  std::optional<std::string> trial;
  std::optional<std::string> feature;
  std::optional<std::string> side;
  std::optional<std::string> view;
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what);
  Error(Errc code, const std::string& what, ErrorContext ctx);

  Errc code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  const ErrorContext& context() const noexcept { return ctx_; }

  // Position for parse errors (1-based, 0 when unknown).
  std::size_t line = 0;
  std::size_t column = 0;

  /// Copy of this error with the unset fields of `extra` filled in.
  Error with_context(const ErrorContext& extra) const;

private:
  Errc code_;
  std::string detail_;
  ErrorContext ctx_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace gaitview
