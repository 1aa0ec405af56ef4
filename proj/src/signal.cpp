#include "gaitview/signal.hpp"

#include "gaitview/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gaitview {

std::string_view to_string(ViewLabel view) noexcept {
  switch (view) {
    case ViewLabel::Frontal: return "frontal";
    case ViewLabel::Lateral: return "lateral";
    case ViewLabel::Mocap3D: return "mocap3d";
  }
  return "?";
}

std::string_view to_string(SideLabel side) noexcept {
  switch (side) {
    case SideLabel::Left: return "left";
    case SideLabel::Right: return "right";
    case SideLabel::Bilateral: return "bilateral";
  }
  return "?";
}

std::string_view to_string(FeatureName feature) noexcept {
  switch (feature) {
    case FeatureName::StepLength: return "step_length";
    case FeatureName::KneeRotation: return "knee_rotation";
    case FeatureName::TrunkRotation: return "trunk_rotation";
    case FeatureName::WristToHipMid: return "wrist_hipmid";
  }
  return "?";
}

std::optional<ViewLabel> parse_view(std::string_view text) noexcept {
  for (auto v : {ViewLabel::Frontal, ViewLabel::Lateral, ViewLabel::Mocap3D})
    if (text == to_string(v)) return v;
  return std::nullopt;
}

std::optional<SideLabel> parse_side(std::string_view text) noexcept {
  for (auto s : {SideLabel::Left, SideLabel::Right, SideLabel::Bilateral})
    if (text == to_string(s)) return s;
  return std::nullopt;
}

std::optional<FeatureName> parse_feature(std::string_view text) noexcept {
  for (auto f : {FeatureName::StepLength, FeatureName::KneeRotation, FeatureName::TrunkRotation,
                 FeatureName::WristToHipMid})
    if (text == to_string(f)) return f;
  return std::nullopt;
}

std::string feature_key(FeatureName feature, SideLabel side) {
  std::string key{to_string(feature)};
  if (side != SideLabel::Bilateral) {
    key += '_';
    key += to_string(side);
  }
  return key;
}

std::string TrialId::str() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%02d_t%02d", subject_index, trial_index);
  return buf;
}

TimeSeries::TimeSeries(std::vector<double> samples, double sample_rate_hz, std::string label)
    : samples_(std::move(samples)), sample_rate_hz_(sample_rate_hz), label_(std::move(label)) {
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_))
    fail(Errc::InvalidArgument, "sample rate must be positive and finite");
  for (std::size_t i = 0; i < samples_.size(); ++i)
    if (!std::isfinite(samples_[i]))
      fail(Errc::NonFiniteValue, "non-finite sample at index " + std::to_string(i) +
                                     (label_.empty() ? "" : " of " + label_));
}

TimeSeries TimeSeries::with_samples(std::vector<double> samples) const {
  return TimeSeries(std::move(samples), sample_rate_hz_, label_);
}

TimeSeries resample_linear(const TimeSeries& ts, std::size_t target_len) {
  const std::size_t n = ts.size();
  if (n < 2 || target_len < 2)
    fail(Errc::DegenerateSignal, "resampling needs at least 2 input and 2 output samples");
  if (target_len == n) return ts;

  std::vector<double> out(target_len);
  const auto src = ts.samples();
  const double scale = static_cast<double>(n - 1) / static_cast<double>(target_len - 1);
  out.front() = src.front();
  out.back() = src.back();
  for (std::size_t k = 1; k + 1 < target_len; ++k) {
    const double pos = static_cast<double>(k) * scale;
    auto lo = static_cast<std::size_t>(pos);
    if (lo >= n - 1) lo = n - 2;
    const double frac = pos - static_cast<double>(lo);
    out[k] = src[lo] + frac * (src[lo + 1] - src[lo]);
  }
  const double rate = ts.sample_rate_hz() * static_cast<double>(target_len - 1) / static_cast<double>(n - 1);
  return TimeSeries(std::move(out), rate, ts.label());
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double population_variance(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return ss / static_cast<double>(values.size());
}

double sample_sd(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

TimeSeries znormalize(const TimeSeries& ts) {
  if (ts.size() < 2) fail(Errc::DegenerateSignal, "z-normalization needs at least 2 samples");
  const auto src = ts.samples();
  const double m = mean(src);
  const double var = population_variance(src);
  // Relative test so that large offsets with rounding noise still count as constant.
  double scale = 0.0;
  for (double v : src) scale = std::max(scale, std::abs(v));
  if (!(var > 0.0) || std::sqrt(var) <= 1e-12 * scale)
    fail(Errc::ConstantSignal, "signal has zero variance" + (ts.label().empty() ? "" : ": " + ts.label()));
  const double sd = std::sqrt(var);
  std::vector<double> out(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) out[i] = (src[i] - m) / sd;
  return ts.with_samples(std::move(out));
}

}  // namespace gaitview
