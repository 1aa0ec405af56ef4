#include "gaitview/synth.hpp"

#include "gaitview/error.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

namespace gaitview {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
const Eigen::Vector3d kUp = Eigen::Vector3d::UnitZ();

Eigen::Vector3d about_vertical(double angle_rad, const Eigen::Vector3d& v) {
  return Eigen::AngleAxisd(angle_rad, kUp) * v;
}

// Unit vector in the sagittal plane, `angle` forward of straight down.
Eigen::Vector3d sagittal(double angle_rad) { return {std::sin(angle_rad), 0.0, -std::cos(angle_rad)}; }

std::mt19937_64 stream_for(std::uint64_t seed, std::uint64_t subject, std::uint64_t purpose) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(subject), static_cast<std::uint32_t>(purpose)};
  return std::mt19937_64(seq);
}

void positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(Errc::InvalidArgument, std::string(name) + " must be positive");
}

}  // namespace

void GaitModelParams::validate() const {
  if (n_frames < 2) fail(Errc::InvalidArgument, "n_frames must be >= 2");
  positive(sample_rate_hz, "sample_rate_hz");
  positive(cycle_hz, "cycle_hz");
  positive(walking_speed_mps, "walking_speed_mps");
  for (double len : {thigh_length, shank_length, ankle_height, pelvis_width, shoulder_width, trunk_length,
                     upper_arm_length, forearm_length, head_height})
    positive(len, "segment length");
  if (noise_sd < 0.0) fail(Errc::InvalidArgument, "noise_sd must be >= 0");
}

MarkerSequence generate_gait(const GaitModelParams& p) {
  p.validate();
  const std::vector<std::string> names = {"HEAD", "LANK", "LELB", "LHIP", "LKNE", "LSHO", "LWRA",
                                          "RANK", "RELB", "RHIP", "RKNE", "RSHO", "RWRA", "SACR"};
  enum Slot { Head, LAnk, LElb, LHip, LKne, LSho, LWra, RAnk, RElb, RHip, RKne, RSho, RWra, Sacr };

  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  const double hip_height = p.thigh_length + p.shank_length + p.ankle_height;
  MarkerSequence seq;
  seq.marker_names = names;
  seq.frames.reserve(p.n_frames);

  for (std::size_t i = 0; i < p.n_frames; ++i) {
    const double t = static_cast<double>(i) / p.sample_rate_hz;
    const double phase = 2.0 * std::numbers::pi * p.cycle_hz * t;
    const double pelvis_yaw = -p.pelvis_rotation_deg * kDegToRad * std::sin(phase);
    const double shoulder_yaw = p.shoulder_rotation_deg * kDegToRad * std::sin(phase);

    const Eigen::Vector3d pelvis(p.walking_speed_mps * t, 0.0, hip_height + p.pelvis_bob_m * std::cos(2.0 * phase));
    const Eigen::Vector3d chest = pelvis + Eigen::Vector3d(0.0, 0.0, p.trunk_length);

    std::vector<Eigen::Vector3d> pos(names.size());
    pos[Sacr] = pelvis + about_vertical(pelvis_yaw, {-0.1, 0.0, 0.0});
    pos[Head] = chest + Eigen::Vector3d(0.0, 0.0, p.head_height);

    struct Side {
      double sign;  // +1 left, -1 right
      double phase;
      Slot hip, knee, ankle, shoulder, elbow, wrist;
    };
    for (const Side& s : {Side{1.0, phase, LHip, LKne, LAnk, LSho, LElb, LWra},
                          Side{-1.0, phase + std::numbers::pi, RHip, RKne, RAnk, RSho, RElb, RWra}}) {
      const double thigh = p.hip_swing_deg * kDegToRad * std::sin(s.phase);
      const double flex = (p.knee_flex_min_deg +
                           (p.knee_flex_max_deg - p.knee_flex_min_deg) * 0.5 * (1.0 - std::cos(s.phase + std::numbers::pi / 3.0))) *
                          kDegToRad;
      pos[s.hip] = pelvis + about_vertical(pelvis_yaw, {0.0, s.sign * p.pelvis_width / 2.0, 0.0});
      pos[s.knee] = pos[s.hip] + p.thigh_length * sagittal(thigh);
      pos[s.ankle] = pos[s.knee] + p.shank_length * sagittal(thigh - flex);

      const double arm = -p.arm_swing_deg * kDegToRad * std::sin(s.phase);
      pos[s.shoulder] = chest + about_vertical(shoulder_yaw, {0.0, s.sign * p.shoulder_width / 2.0, 0.0});
      pos[s.elbow] = pos[s.shoulder] + p.upper_arm_length * sagittal(arm);
      pos[s.wrist] = pos[s.elbow] + p.forearm_length * sagittal(arm + p.elbow_flex_deg * kDegToRad);
    }

    MarkerFrame frame;
    frame.frame_index = static_cast<long>(i);
    frame.time_s = t;
    frame.positions.reserve(names.size());
    for (const auto& v : pos) {
      Point3 mm{v.x() * 1000.0, v.y() * 1000.0, v.z() * 1000.0};
      if (p.noise_sd > 0.0) {
        mm.x += p.noise_sd * noise(rng);
        mm.y += p.noise_sd * noise(rng);
        mm.z += p.noise_sd * noise(rng);
      }
      frame.positions.push_back(mm);
    }
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

CameraModel CameraModel::looking(ViewLabel view, const Eigen::Vector3d& position, const Eigen::Vector3d& heading,
                                 double tilt_down_deg) {
  Eigen::Vector3d flat = heading - heading.dot(kUp) * kUp;
  if (flat.norm() < 1e-12) fail(Errc::InvalidArgument, "camera heading must have a horizontal component");
  flat.normalize();
  const double tilt = tilt_down_deg * kDegToRad;
  const Eigen::Vector3d forward = std::cos(tilt) * flat - std::sin(tilt) * kUp;
  const Eigen::Vector3d right = flat.cross(kUp).normalized();
  const Eigen::Vector3d down = forward.cross(right);

  CameraModel cam;
  cam.view = view;
  cam.position = position;
  cam.rotation.row(0) = right.transpose();
  cam.rotation.row(1) = down.transpose();
  cam.rotation.row(2) = forward.transpose();
  return cam;
}

Eigen::Vector3d CameraModel::to_camera(const Eigen::Vector3d& world_m) const { return rotation * (world_m - position); }

void CameraModel::validate() const {
  if (!(focal_px > 0.0)) fail(Errc::InvalidArgument, "focal_px must be positive");
  if (!(rotation * rotation.transpose()).isIdentity(1e-9) || rotation.determinant() < 0.0)
    fail(Errc::InvalidArgument, "camera rotation is not a proper orthonormal matrix");
}

CameraModel PresetViews::frontal(const Eigen::Vector3d& path_centre) const {
  const Eigen::Vector3d pos(path_centre.x() + frontal_distance_m, path_centre.y(), frontal_height_m);
  auto cam = CameraModel::looking(ViewLabel::Frontal, pos, -Eigen::Vector3d::UnitX(), frontal_tilt_deg);
  cam.focal_px = focal_px;
  return cam;
}

CameraModel PresetViews::lateral(const Eigen::Vector3d& path_centre) const {
  const Eigen::Vector3d pos(path_centre.x(), path_centre.y() - lateral_distance_m, lateral_height_m);
  auto cam = CameraModel::looking(ViewLabel::Lateral, pos, Eigen::Vector3d::UnitY(), lateral_tilt_deg);
  cam.focal_px = focal_px;
  return cam;
}

Eigen::Vector2d project_point(const CameraModel& cam, const Eigen::Vector3d& world_m) {
  const Eigen::Vector3d c = cam.to_camera(world_m);
  if (c.z() <= 1e-9) fail(Errc::BehindCamera, "point at or behind the image plane");
  return cam.principal_point + cam.focal_px * Eigen::Vector2d(c.x() / c.z(), c.y() / c.z());
}

PoseSequence project(const MarkerSequence& seq, const CameraModel& cam, const ProjectionOptions& opts) {
  cam.validate();
  if (opts.confidence < 0.0 || opts.confidence > 1.0) fail(Errc::InvalidArgument, "confidence must lie in [0,1]");

  std::array<std::optional<std::size_t>, kKeypointCount> source{};
  for (std::size_t k = 0; k < kKeypointCount; ++k)
    if (opts.marker_map.roles[k]) source[k] = seq.marker_index(*opts.marker_map.roles[k]);
  const auto head = seq.marker_index(opts.head_marker);
  const auto lsho = source[index_of(KeypointName::LeftShoulder)];
  const auto rsho = source[index_of(KeypointName::RightShoulder)];

  PoseSequence out;
  out.view = cam.view;
  out.frames.reserve(seq.frames.size());
  for (const auto& frame : seq.frames) {
    PoseFrame pf;
    pf.frame_index = frame.frame_index;
    pf.time_s = frame.time_s;
    auto emit = [&](KeypointName kp, const Eigen::Vector3d& world_m, const std::string& name) {
      const Eigen::Vector3d c = cam.to_camera(world_m);
      if (c.z() <= 1e-9)
        fail(Errc::BehindCamera, "marker " + name + " in frame " + std::to_string(frame.frame_index));
      const Eigen::Vector2d px = cam.principal_point + cam.focal_px * Eigen::Vector2d(c.x() / c.z(), c.y() / c.z());
      pf[kp] = Keypoint{px.x(), px.y(), opts.confidence};
    };
    auto world = [&](std::size_t idx) -> Eigen::Vector3d {
      const Point3& p = frame.positions[idx];
      return Eigen::Vector3d(p.x, p.y, p.z) / 1000.0;
    };

    for (std::size_t k = 0; k < kKeypointCount; ++k)
      if (source[k]) emit(static_cast<KeypointName>(k), world(*source[k]), seq.marker_names[*source[k]]);

    if (head && lsho && rsho) {
      Eigen::Vector3d left = world(*lsho) - world(*rsho);
      left -= left.dot(kUp) * kUp;
      if (left.norm() > 1e-9) {
        left.normalize();
        const Eigen::Vector3d fwd = left.cross(kUp);
        const Eigen::Vector3d h = world(*head);
        const std::string& name = opts.head_marker;
        emit(KeypointName::Nose, h + 0.10 * fwd, name);
        emit(KeypointName::LeftEye, h + 0.08 * fwd + 0.035 * left + 0.03 * kUp, name);
        emit(KeypointName::RightEye, h + 0.08 * fwd - 0.035 * left + 0.03 * kUp, name);
        emit(KeypointName::LeftEar, h + 0.075 * left, name);
        emit(KeypointName::RightEar, h - 0.075 * left, name);
      }
    }
    out.frames.push_back(std::move(pf));
  }
  return out;
}

GaitModelParams subject_params(const DatasetOptions& opts, int subject_index) {
  auto rng = stream_for(opts.seed, static_cast<std::uint64_t>(subject_index), 0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto around = [&](double centre, double spread) { return centre * (1.0 + spread * (2.0 * unit(rng) - 1.0)); };

  GaitModelParams p = opts.base;
  p.walking_speed_mps = around(p.walking_speed_mps, 0.15);
  p.cycle_hz = around(p.cycle_hz, 0.10);
  const double stature = around(1.0, 0.08);
  for (double* len : {&p.thigh_length, &p.shank_length, &p.ankle_height, &p.pelvis_width, &p.shoulder_width,
                      &p.trunk_length, &p.upper_arm_length, &p.forearm_length, &p.head_height})
    *len *= stature;
  for (double* amp : {&p.hip_swing_deg, &p.knee_flex_max_deg, &p.arm_swing_deg, &p.pelvis_rotation_deg,
                      &p.shoulder_rotation_deg, &p.pelvis_bob_m})
    *amp = around(*amp, 0.20);
  p.seed = rng();
  return p;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::IoError, "cannot write " + path.string());
  out << content;
  out.close();
  if (!out) fail(Errc::IoError, "failed writing " + path.string());
}

}  // namespace

std::vector<DatasetEntry> make_paired_dataset(const DatasetOptions& opts, const std::filesystem::path& out_dir) {
  if (opts.subjects < 1) fail(Errc::InvalidArgument, "subjects must be >= 1");
  if (opts.pixel_noise_sd < 0.0) fail(Errc::InvalidArgument, "pixel noise must be >= 0");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec || !std::filesystem::is_directory(out_dir)) fail(Errc::IoError, "cannot create directory " + out_dir.string());

  std::vector<DatasetEntry> entries;
  for (std::size_t s = 1; s <= opts.subjects; ++s) {
    const int subject = static_cast<int>(s);
    const TrialId trial{subject, 1};
    const auto params = subject_params(opts, subject);
    const auto mocap = generate_gait(params);

    const Eigen::Vector3d centre(params.walking_speed_mps * params.duration_s() / 2.0, 0.0, 0.0);
    auto noise_rng = stream_for(opts.seed, s, 1);
    std::normal_distribution<double> noise(0.0, 1.0);

    const std::string stem = trial.str();
    std::ostringstream mocap_csv;
    write_marker_csv(mocap_csv, mocap);
    write_file(out_dir / (stem + "_mocap3d.csv"), mocap_csv.str());
    entries.push_back({trial, ViewLabel::Mocap3D, stem + "_mocap3d.csv"});

    for (const auto& cam : {opts.views.frontal(centre), opts.views.lateral(centre)}) {
      PoseSequence pose = project(mocap, cam);
      if (opts.pixel_noise_sd > 0.0)
        for (auto& frame : pose.frames)
          for (auto& kp : frame.keypoints)
            if (kp) {
              kp->x += opts.pixel_noise_sd * noise(noise_rng);
              kp->y += opts.pixel_noise_sd * noise(noise_rng);
            }
      const std::string file = stem + "_" + std::string(to_string(cam.view)) + ".csv";
      std::ostringstream csv;
      write_pose_csv(csv, pose);
      write_file(out_dir / file, csv.str());
      entries.push_back({trial, cam.view, file});
    }
  }

  std::ostringstream manifest;
  manifest << "# gaitview synthetic dataset: seed=" << opts.seed << " subjects=" << opts.subjects
           << " frames=" << opts.base.n_frames << " pixel_noise_sd=" << format_double(opts.pixel_noise_sd) << '\n';
  manifest << kManifestHeader << '\n';
  for (const auto& e : entries)
    manifest << e.trial.subject_index << ',' << e.trial.trial_index << ',' << to_string(e.source) << ','
             << e.file.generic_string() << '\n';
  write_file(out_dir / kManifestFile, manifest.str());
  return entries;
}

}  // namespace gaitview
