#include "gaitview/error.hpp"

namespace gaitview {

namespace {

std::string compose(Errc code, const std::string& detail, const ErrorContext& ctx) {
  std::string out{errc_name(code)};
  std::string tags;
  auto add = [&tags](std::string_view key, const std::optional<std::string>& value) {
    if (!value) return;
    if (!tags.empty()) tags += ", ";
    tags += key;
    tags += '=';
    tags += *value;
  };
  add("stage", ctx.stage);
  add("trial", ctx.trial);
  add("feature", ctx.feature);
  add("side", ctx.side);
  add("view", ctx.view);
  if (!tags.empty()) out += " [" + tags + "]";
  out += ": ";
  out += detail;
  return out;
}

}  // namespace

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::DegenerateSignal: return "DegenerateSignal";
    case Errc::ConstantSignal: return "ConstantSignal";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::ParseError: return "ParseError";
    case Errc::SchemaError: return "SchemaError";
    case Errc::DuplicateError: return "DuplicateError";
    case Errc::GapTooLarge: return "GapTooLarge";
    case Errc::InvalidFilterSpec: return "InvalidFilterSpec";
    case Errc::SignalTooShort: return "SignalTooShort";
    case Errc::MissingLandmark: return "MissingLandmark";
    case Errc::NoWalkingDirection: return "NoWalkingDirection";
    case Errc::DegenerateGeometry: return "DegenerateGeometry";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::AllZeroDifferences: return "AllZeroDifferences";
    case Errc::EmptySample: return "EmptySample";
    case Errc::UnsupportedSampleSize: return "UnsupportedSampleSize";
    case Errc::ConstantSample: return "ConstantSample";
    case Errc::UnpairedSubject: return "UnpairedSubject";
    case Errc::DegenerateMatrix: return "DegenerateMatrix";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::BehindCamera: return "BehindCamera";
    case Errc::IoError: return "IoError";
    case Errc::NotAnalyzed: return "NotAnalyzed";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what) : Error(code, what, ErrorContext{}) {}

Error::Error(Errc code, const std::string& what, ErrorContext ctx)
    : std::runtime_error(compose(code, what, ctx)), code_(code), detail_(what), ctx_(std::move(ctx)) {}

Error Error::with_context(const ErrorContext& extra) const {
  ErrorContext merged = ctx_;
  if (!merged.stage) merged.stage = extra.stage;
  if (!merged.trial) merged.trial = extra.trial;
  if (!merged.feature) merged.feature = extra.feature;
  if (!merged.side) merged.side = extra.side;
  if (!merged.view) merged.view = extra.view;
  Error out(code_, detail_, std::move(merged));
  out.line = line;
  out.column = column;
  return out;
}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace gaitview
