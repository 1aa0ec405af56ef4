#pragma once

#include "gaitview/ingest.hpp"
#include "gaitview/signal.hpp"

#include <Eigen/Core>

#include <array>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace gaitview {

/// Source-agnostic landmark positions for one trial. 2D sources keep their
/// pixel coordinates in x/y with z = 0; 3D sources keep world millimetres.
struct LandmarkFrames {
  ViewLabel source = ViewLabel::Mocap3D;
  int dims = 3;
  int vertical_axis = 2;  // 3D only
  double sample_rate_hz = 100.0;
  std::vector<std::array<std::optional<Eigen::Vector3d>, kKeypointCount>> frames;

  std::size_t size() const noexcept { return frames.size(); }
};

LandmarkFrames to_landmarks(const PoseSequence& seq, double sample_rate_hz);
LandmarkFrames to_landmarks(const MarkerSequence& seq, const MarkerMap& map, double sample_rate_hz);

/// Signed inter-ankle distance along the walking direction; positive while
/// the named side leads.
TimeSeries step_length_signal(const LandmarkFrames& lm, SideLabel side);
/// Interior knee angle in degrees, [0, 180].
TimeSeries knee_rotation_signal(const LandmarkFrames& lm, SideLabel side);
/// Signed angle from the hip line to the shoulder line, degrees in (-180, 180].
/// 3D sources measure it about the vertical axis.
TimeSeries trunk_rotation_signal(const LandmarkFrames& lm);
/// Distance from the wrist to the hip midpoint, in source units.
TimeSeries wrist_hipmid_signal(const LandmarkFrames& lm, SideLabel side);

/// Unit walking direction in the image plane (2D) or the ground plane (3D),
/// oriented along the net hip-midpoint displacement. Returned in full
/// coordinates (zero along the vertical / unused axis).
Eigen::Vector3d walking_axis(const LandmarkFrames& lm);

using FeatureKey = std::pair<FeatureName, SideLabel>;

/// The fixed seven-signal layout: three lateralized features on both sides
/// plus bilateral trunk rotation.
const std::vector<FeatureKey>& standard_feature_keys();

struct GaitFeatureSet {
  TrialId trial;
  ViewLabel source = ViewLabel::Mocap3D;
  std::map<FeatureKey, TimeSeries> signals;

  const TimeSeries& at(FeatureName feature, SideLabel side) const;
};

/// Computes every standard feature; errors carry the feature and side.
GaitFeatureSet extract_all(const LandmarkFrames& lm, const TrialId& trial);
GaitFeatureSet extract_all(const PoseSequence& seq, const TrialId& trial, double sample_rate_hz);
GaitFeatureSet extract_all(const MarkerSequence& seq, const MarkerMap& map, const TrialId& trial,
                           double sample_rate_hz);

}  // namespace gaitview
