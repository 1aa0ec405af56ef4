#pragma once

#include "gaitview/signal.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gaitview {

/// 17-point body skeleton used both for 2D keypoints and for the anatomical
/// roles bound to 3D markers. Order is the serialization order.
enum class KeypointName : std::size_t {
  Nose,
  LeftEye,
  RightEye,
  LeftEar,
  RightEar,
  LeftShoulder,
  RightShoulder,
  LeftElbow,
  RightElbow,
  LeftWrist,
  RightWrist,
  LeftHip,
  RightHip,
  LeftKnee,
  RightKnee,
  LeftAnkle,
  RightAnkle,
};

inline constexpr std::size_t kKeypointCount = 17;

std::string_view to_string(KeypointName kp) noexcept;
std::optional<KeypointName> parse_keypoint(std::string_view text) noexcept;
constexpr std::size_t index_of(KeypointName kp) noexcept { return static_cast<std::size_t>(kp); }
std::array<KeypointName, kKeypointCount> all_keypoints() noexcept;

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double conf = 0.0;
  bool operator==(const Keypoint&) const = default;
};

struct PoseFrame {
  long frame_index = 0;
  double time_s = 0.0;
  std::array<std::optional<Keypoint>, kKeypointCount> keypoints{};
  bool operator==(const PoseFrame&) const = default;

  std::optional<Keypoint>& operator[](KeypointName kp) { return keypoints[index_of(kp)]; }
  const std::optional<Keypoint>& operator[](KeypointName kp) const { return keypoints[index_of(kp)]; }
};

struct PoseSequence {
  ViewLabel view = ViewLabel::Frontal;
  std::vector<PoseFrame> frames;
  bool operator==(const PoseSequence&) const = default;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  bool operator==(const Point3&) const = default;
};

struct MarkerFrame {
  long frame_index = 0;
  double time_s = 0.0;
  std::vector<Point3> positions;  // aligned with MarkerSequence::marker_names
  bool operator==(const MarkerFrame&) const = default;
};

struct MarkerSequence {
  std::vector<std::string> marker_names;  // sorted
  std::vector<MarkerFrame> frames;
  bool operator==(const MarkerSequence&) const = default;

  std::optional<std::size_t> marker_index(std::string_view name) const;
};

/// Binds anatomical roles to 3D marker names. Key/value text:
///
///     # comment
///     left_ankle = LANK
///     vertical_axis = z
struct MarkerMap {
  std::array<std::optional<std::string>, kKeypointCount> roles{};
  int vertical_axis = 2;  // 0 = x, 1 = y, 2 = z

  const std::optional<std::string>& operator[](KeypointName kp) const { return roles[index_of(kp)]; }

  /// Map matching the marker names produced by the synthetic generator.
  static MarkerMap defaults();
};

inline constexpr std::string_view kPoseCsvHeader = "frame,time_s,keypoint,x,y,conf";
inline constexpr std::string_view kMarkerCsvHeader = "frame,time_s,marker,x,y,z";

PoseSequence parse_pose_csv(std::istream& in, ViewLabel view);
PoseSequence parse_pose_csv(const std::filesystem::path& path, ViewLabel view);
MarkerSequence parse_marker_csv(std::istream& in);
MarkerSequence parse_marker_csv(const std::filesystem::path& path);
MarkerMap parse_marker_map(std::istream& in);
MarkerMap parse_marker_map(const std::filesystem::path& path);

void write_pose_csv(std::ostream& out, const PoseSequence& seq);
void write_marker_csv(std::ostream& out, const MarkerSequence& seq);

struct GapFillOptions {
  double conf_threshold = 0.3;
  std::size_t max_gap = 10;
};

/// Replaces low-confidence (or absent) keypoints by linear interpolation
/// between the flanking good frames. Keypoints that never appear are left
/// absent. Throws GapTooLarge for long gaps and for gaps touching either end.
PoseSequence fill_gaps(const PoseSequence& seq, const GapFillOptions& opts = {});

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace gaitview
