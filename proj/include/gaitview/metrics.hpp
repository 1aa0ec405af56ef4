#pragma once

#include "gaitview/signal.hpp"

#include <cstddef>
#include <vector>

namespace gaitview {

enum class DtwLocalCost { AbsoluteDifference };
enum class CorrelationMode {
  Raw,      // unnormalized lagged dot-product
  Pearson,  // raw sum divided by N * sd_x * sd_y (population sds)
};

struct MetricConfig {
  bool normalize = true;  // z-normalize each signal before comparing
  std::size_t histogram_bins = 256;
  double log_base = 2.0;
  double smoothing_epsilon = 1e-10;
  DtwLocalCost dtw_distance = DtwLocalCost::AbsoluteDifference;
  CorrelationMode correlation = CorrelationMode::Raw;

  void validate() const;
};

struct CrossCorrelation {
  double value = 0.0;
  long lag = 0;
};

/// Full (unwindowed) dynamic time warping with the three-predecessor step
/// pattern and |x_i - y_j| local cost.
double dtw_distance(const TimeSeries& x, const TimeSeries& y, const MetricConfig& cfg = {});
double dtw_distance(std::span<const double> x, std::span<const double> y);

/// Peak of R(tau) = sum_t x_t * y_{t+tau} over every lag. Positive lags mean
/// y trails x. Ties go to the smallest |tau|, then to the negative lag.
CrossCorrelation max_cross_correlation(const TimeSeries& x, const TimeSeries& y, const MetricConfig& cfg = {});

/// Histogram KL divergence D(P || Q) with P from `reference` (3D) and Q from
/// `candidate` (2D), both binned on their pooled range.
double kl_divergence(const TimeSeries& reference, const TimeSeries& candidate, const MetricConfig& cfg = {});

/// Shannon entropy of the equal-width value histogram over [min, max].
double information_entropy(const TimeSeries& x, const MetricConfig& cfg = {});

struct MetricRecord {
  TrialId trial;
  FeatureName feature = FeatureName::StepLength;
  SideLabel side = SideLabel::Left;
  ViewLabel view = ViewLabel::Frontal;
  double dtw = 0.0;
  double mcc = 0.0;
  long mcc_lag = 0;
  double kld = 0.0;
  double ie_2d = 0.0;
  double ie_3d = 0.0;
};

/// Scores one 2D feature signal against its 3D counterpart. The 2D signal is
/// linearly resampled to the 3D length first. Errors carry the record key.
MetricRecord compute_record(const TrialId& trial, FeatureName feature, SideLabel side, ViewLabel view,
                            const TimeSeries& signal_3d, const TimeSeries& signal_2d, const MetricConfig& cfg = {});

/// Equal-width bin counts over [lo, hi]; the top edge falls into the last bin.
std::vector<std::size_t> histogram(std::span<const double> values, double lo, double hi, std::size_t bins);

}  // namespace gaitview
