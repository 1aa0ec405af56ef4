#pragma once

#include "gaitview/ingest.hpp"
#include "gaitview/signal.hpp"

#include <span>
#include <vector>

namespace gaitview {

/// Low-pass Butterworth settings. `order` is the net order of the
/// forward-backward cascade: a design of order/2 is run in both directions.
struct FilterSpec {
  double cutoff_hz = 7.0;
  double sample_rate_hz = 100.0;
  int order = 4;

  void validate() const;  // throws InvalidFilterSpec
  int design_order() const noexcept { return order / 2; }
  std::size_t pad_length() const noexcept { return 3 * static_cast<std::size_t>(order + 1); }
};

struct FilterCoefficients {
  std::vector<double> b;  // numerator, b[0] multiplies x[n]
  std::vector<double> a;  // denominator, a[0] == 1
};

/// Digital Butterworth low-pass via the bilinear transform with
/// frequency pre-warping, normalized to unit DC gain.
FilterCoefficients butterworth_coeffs(const FilterSpec& spec);

/// Single causal pass (transposed direct form II) with optional initial state.
std::vector<double> lfilter(const FilterCoefficients& c, std::span<const double> x,
                            std::span<const double> initial_state = {});

/// Zero-phase forward-backward filtering. The input is extended by odd
/// reflection of spec.pad_length() samples at each end; the initial states
/// of both passes are chosen so that forward-backward and backward-forward
/// filtering coincide, which makes the result time-reversal symmetric.
TimeSeries filtfilt(const TimeSeries& ts, const FilterSpec& spec);
std::vector<double> filtfilt(std::span<const double> x, const FilterSpec& spec);

/// Filters every coordinate track that is present in all frames. Tracks with
/// any absent frame are left untouched.
PoseSequence filter_tracks(const PoseSequence& seq, const FilterSpec& spec);
MarkerSequence filter_tracks(const MarkerSequence& seq, const FilterSpec& spec);

}  // namespace gaitview
