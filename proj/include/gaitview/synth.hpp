#pragma once

#include "gaitview/ingest.hpp"
#include "gaitview/signal.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gaitview {

/// Sinusoidal walking model. World frame: x along the walking direction,
/// y to the walker's left, z up; lengths in metres, angles in degrees.
struct GaitModelParams {
  std::size_t n_frames = 169;
  double sample_rate_hz = 100.0;
  double cycle_hz = 1.0;
  double walking_speed_mps = 1.2;

  double thigh_length = 0.45;
  double shank_length = 0.43;
  double ankle_height = 0.08;
  double pelvis_width = 0.26;
  double shoulder_width = 0.38;
  double trunk_length = 0.50;
  double upper_arm_length = 0.30;
  double forearm_length = 0.27;
  double head_height = 0.25;

  double hip_swing_deg = 22.0;
  double knee_flex_min_deg = 5.0;
  double knee_flex_max_deg = 60.0;
  double arm_swing_deg = 18.0;
  double elbow_flex_deg = 20.0;
  double pelvis_rotation_deg = 5.0;
  double shoulder_rotation_deg = 6.0;
  double pelvis_bob_m = 0.015;

  double noise_sd = 0.0;  // i.i.d. marker noise, millimetres
  std::uint64_t seed = 1;

  void validate() const;
  double duration_s() const noexcept { return static_cast<double>(n_frames - 1) / sample_rate_hz; }
};

/// Marker trajectories in millimetres. Marker names: HEAD, SACR and
/// L/R SHO, ELB, WRA, HIP, KNE, ANK.
MarkerSequence generate_gait(const GaitModelParams& params);

/// Pinhole camera. `rotation` maps world directions to camera axes
/// (rows: image right, image down, optical axis).
struct CameraModel {
  ViewLabel view = ViewLabel::Frontal;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  double focal_px = 1000.0;
  Eigen::Vector2d principal_point{960.0, 540.0};
  int width_px = 1920;
  int height_px = 1080;

  /// Camera looking along the horizontal `heading`, pitched down by `tilt_down_deg`.
  static CameraModel looking(ViewLabel view, const Eigen::Vector3d& position, const Eigen::Vector3d& heading,
                             double tilt_down_deg);

  Eigen::Vector3d to_camera(const Eigen::Vector3d& world_m) const;
  void validate() const;
};

/// Recording geometry relative to the centre of the walking path.
struct PresetViews {
  double frontal_distance_m = 3.0;
  double frontal_height_m = 1.2;
  double frontal_tilt_deg = 10.0;
  double lateral_distance_m = 2.5;
  double lateral_height_m = 0.9;
  double lateral_tilt_deg = 0.0;
  double focal_px = 1000.0;

  /// Frontal camera on the walking line, `frontal_distance_m` ahead of the
  /// path centre, facing the walker.
  CameraModel frontal(const Eigen::Vector3d& path_centre) const;
  /// Lateral camera on the walker's right, facing the path centre.
  CameraModel lateral(const Eigen::Vector3d& path_centre) const;
};

struct ProjectionOptions {
  double confidence = 1.0;
  MarkerMap marker_map = MarkerMap::defaults();
  std::string head_marker = "HEAD";  // source of the five face keypoints
};

/// World -> camera -> pixels. Throws BehindCamera for any point at or behind
/// the image plane.
PoseSequence project(const MarkerSequence& seq, const CameraModel& cam, const ProjectionOptions& opts = {});

/// Pixel coordinates of a single world point (metres).
Eigen::Vector2d project_point(const CameraModel& cam, const Eigen::Vector3d& world_m);

struct DatasetOptions {
  GaitModelParams base;
  std::size_t subjects = 18;
  double pixel_noise_sd = 2.0;
  PresetViews views;
  std::uint64_t seed = 1;
};

struct DatasetEntry {
  TrialId trial;
  ViewLabel source = ViewLabel::Mocap3D;
  std::filesystem::path file;  // relative to the dataset directory
};

inline constexpr std::string_view kManifestFile = "manifest.csv";
inline constexpr std::string_view kManifestHeader = "subject,trial,source,path";

/// Per-subject randomized model around `opts.base`; deterministic in
/// (opts.seed, subject index).
GaitModelParams subject_params(const DatasetOptions& opts, int subject_index);

/// Writes one mocap and two projected pose CSVs per subject plus the
/// manifest. Returns the manifest entries.
std::vector<DatasetEntry> make_paired_dataset(const DatasetOptions& opts, const std::filesystem::path& out_dir);

}  // namespace gaitview
