#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gaitview {

enum class ViewLabel { Frontal, Lateral, Mocap3D };
enum class SideLabel { Left, Right, Bilateral };
enum class FeatureName { StepLength, KneeRotation, TrunkRotation, WristToHipMid };

std::string_view to_string(ViewLabel view) noexcept;
std::string_view to_string(SideLabel side) noexcept;
std::string_view to_string(FeatureName feature) noexcept;

std::optional<ViewLabel> parse_view(std::string_view text) noexcept;
std::optional<SideLabel> parse_side(std::string_view text) noexcept;
std::optional<FeatureName> parse_feature(std::string_view text) noexcept;

/// "knee_rotation_left", "trunk_rotation", ... as used in report files.
std::string feature_key(FeatureName feature, SideLabel side);

struct TrialId {
  int subject_index = 1;
  int trial_index = 1;

  auto operator<=>(const TrialId&) const = default;
  std::string str() const;  // "s01_t01"
};

/// Uniformly sampled real-valued signal. Immutable once built; the
/// constructor rejects non-finite samples and non-positive rates.
class TimeSeries {
public:
  TimeSeries(std::vector<double> samples, double sample_rate_hz, std::string label = {});

  std::span<const double> samples() const noexcept { return samples_; }
  const std::vector<double>& values() const noexcept { return samples_; }
  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  const std::string& label() const noexcept { return label_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }
  double operator[](std::size_t i) const { return samples_[i]; }

  TimeSeries with_samples(std::vector<double> samples) const;

private:
  std::vector<double> samples_;
  double sample_rate_hz_;
  std::string label_;
};

/// Endpoint-preserving linear resampling onto `target_len` uniform points.
/// The sample rate scales with the length change.
TimeSeries resample_linear(const TimeSeries& ts, std::size_t target_len);

/// Zero mean, unit population standard deviation.
TimeSeries znormalize(const TimeSeries& ts);

double mean(std::span<const double> values);
/// Population (n) variance.
double population_variance(std::span<const double> values);
/// Sample (n - 1) standard deviation; 0 for fewer than two values.
double sample_sd(std::span<const double> values);

}  // namespace gaitview
