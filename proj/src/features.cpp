#include "gaitview/features.hpp"

#include "gaitview/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace gaitview {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

const Eigen::Vector3d& need(const LandmarkFrames& lm, std::size_t frame, KeypointName kp) {
  const auto& slot = lm.frames[frame][index_of(kp)];
  if (!slot)
    fail(Errc::MissingLandmark, std::string(to_string(kp)) + " missing in frame " + std::to_string(frame));
  return *slot;
}

void require_side(SideLabel side) {
  if (side == SideLabel::Bilateral) fail(Errc::InvalidArgument, "feature needs Left or Right");
}

struct SideJoints {
  KeypointName hip, knee, ankle, wrist;
  KeypointName other_ankle;
};

SideJoints joints(SideLabel side) {
  if (side == SideLabel::Left)
    return {KeypointName::LeftHip, KeypointName::LeftKnee, KeypointName::LeftAnkle, KeypointName::LeftWrist,
            KeypointName::RightAnkle};
  return {KeypointName::RightHip, KeypointName::RightKnee, KeypointName::RightAnkle, KeypointName::RightWrist,
          KeypointName::LeftAnkle};
}

// Two in-plane axes, right-handed about the vertical for 3D.
std::pair<int, int> plane_axes(const LandmarkFrames& lm) {
  if (lm.dims == 2) return {0, 1};
  return {(lm.vertical_axis + 1) % 3, (lm.vertical_axis + 2) % 3};
}

double signed_planar_angle(const Eigen::Vector2d& from, const Eigen::Vector2d& to) {
  const double cross = from.x() * to.y() - from.y() * to.x();
  const double dot = from.dot(to);
  double deg = std::atan2(cross, dot) * kRadToDeg;
  if (deg <= -180.0) deg = 180.0;
  return deg;
}

std::string frame_msg(const char* what, std::size_t frame) {
  return std::string(what) + " in frame " + std::to_string(frame);
}

TimeSeries make_series(const LandmarkFrames& lm, std::vector<double> values, FeatureName f, SideLabel s) {
  return TimeSeries(std::move(values), lm.sample_rate_hz, feature_key(f, s));
}

}  // namespace

LandmarkFrames to_landmarks(const PoseSequence& seq, double sample_rate_hz) {
  LandmarkFrames lm;
  lm.source = seq.view;
  lm.dims = 2;
  lm.sample_rate_hz = sample_rate_hz;
  lm.frames.resize(seq.frames.size());
  for (std::size_t i = 0; i < seq.frames.size(); ++i)
    for (std::size_t k = 0; k < kKeypointCount; ++k)
      if (const auto& kp = seq.frames[i].keypoints[k]) lm.frames[i][k] = Eigen::Vector3d(kp->x, kp->y, 0.0);
  return lm;
}

LandmarkFrames to_landmarks(const MarkerSequence& seq, const MarkerMap& map, double sample_rate_hz) {
  LandmarkFrames lm;
  lm.source = ViewLabel::Mocap3D;
  lm.dims = 3;
  lm.vertical_axis = map.vertical_axis;
  lm.sample_rate_hz = sample_rate_hz;
  lm.frames.resize(seq.frames.size());
  for (std::size_t k = 0; k < kKeypointCount; ++k) {
    if (!map.roles[k]) continue;
    const auto idx = seq.marker_index(*map.roles[k]);
    if (!idx) continue;  // reported as MissingLandmark by the feature that needs it
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
      const auto& p = seq.frames[i].positions[*idx];
      lm.frames[i][k] = Eigen::Vector3d(p.x, p.y, p.z);
    }
  }
  return lm;
}

Eigen::Vector3d walking_axis(const LandmarkFrames& lm) {
  const std::size_t n = lm.size();
  if (n < 2) fail(Errc::NoWalkingDirection, "need at least two frames");
  const auto [ax, ay] = plane_axes(lm);

  std::vector<Eigen::Vector2d> mids(n);
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Vector3d mid = 0.5 * (need(lm, i, KeypointName::LeftHip) + need(lm, i, KeypointName::RightHip));
    mids[i] = Eigen::Vector2d(mid[ax], mid[ay]);
    centroid += mids[i];
    scale = std::max(scale, mids[i].cwiseAbs().maxCoeff());
  }
  centroid /= static_cast<double>(n);

  const Eigen::Vector2d net = mids.back() - mids.front();
  if (net.norm() <= 1e-12 * std::max(scale, 1.0))
    fail(Errc::NoWalkingDirection, "hip midpoint has no net displacement");

  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& m : mids) cov += (m - centroid) * (m - centroid).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  Eigen::Vector2d dir = eig.eigenvectors().col(1);  // largest eigenvalue
  if (dir.dot(net) < 0.0) dir = -dir;

  Eigen::Vector3d axis = Eigen::Vector3d::Zero();
  axis[ax] = dir.x();
  axis[ay] = dir.y();
  return axis;
}

TimeSeries step_length_signal(const LandmarkFrames& lm, SideLabel side) {
  require_side(side);
  const auto j = joints(side);
  for (std::size_t i = 0; i < lm.size(); ++i) {
    need(lm, i, j.ankle);
    need(lm, i, j.other_ankle);
  }
  const Eigen::Vector3d axis = walking_axis(lm);
  std::vector<double> out(lm.size());
  for (std::size_t i = 0; i < lm.size(); ++i) out[i] = (need(lm, i, j.ankle) - need(lm, i, j.other_ankle)).dot(axis);
  return make_series(lm, std::move(out), FeatureName::StepLength, side);
}

TimeSeries knee_rotation_signal(const LandmarkFrames& lm, SideLabel side) {
  require_side(side);
  const auto j = joints(side);
  std::vector<double> out(lm.size());
  for (std::size_t i = 0; i < lm.size(); ++i) {
    const Eigen::Vector3d& knee = need(lm, i, j.knee);
    const Eigen::Vector3d thigh = need(lm, i, j.hip) - knee;
    const Eigen::Vector3d shank = need(lm, i, j.ankle) - knee;
    const double scale = std::max({knee.cwiseAbs().maxCoeff(), 1.0});
    if (thigh.norm() <= 1e-12 * scale || shank.norm() <= 1e-12 * scale)
      fail(Errc::DegenerateGeometry, frame_msg("zero-length limb segment", i));
    out[i] = std::atan2(thigh.cross(shank).norm(), thigh.dot(shank)) * kRadToDeg;
  }
  return make_series(lm, std::move(out), FeatureName::KneeRotation, side);
}

TimeSeries trunk_rotation_signal(const LandmarkFrames& lm) {
  const auto [ax, ay] = plane_axes(lm);
  std::vector<double> out(lm.size());
  for (std::size_t i = 0; i < lm.size(); ++i) {
    const Eigen::Vector3d shoulders =
        need(lm, i, KeypointName::RightShoulder) - need(lm, i, KeypointName::LeftShoulder);
    const Eigen::Vector3d hips = need(lm, i, KeypointName::RightHip) - need(lm, i, KeypointName::LeftHip);
    const Eigen::Vector2d s(shoulders[ax], shoulders[ay]);
    const Eigen::Vector2d h(hips[ax], hips[ay]);
    const double scale =
        std::max({need(lm, i, KeypointName::LeftHip).cwiseAbs().maxCoeff(), 1.0});
    if (s.norm() <= 1e-12 * scale) fail(Errc::DegenerateGeometry, frame_msg("zero-length shoulder line", i));
    if (h.norm() <= 1e-12 * scale) fail(Errc::DegenerateGeometry, frame_msg("zero-length hip line", i));
    out[i] = signed_planar_angle(h, s);
  }
  return make_series(lm, std::move(out), FeatureName::TrunkRotation, SideLabel::Bilateral);
}

TimeSeries wrist_hipmid_signal(const LandmarkFrames& lm, SideLabel side) {
  require_side(side);
  const auto j = joints(side);
  std::vector<double> out(lm.size());
  for (std::size_t i = 0; i < lm.size(); ++i) {
    const Eigen::Vector3d mid = 0.5 * (need(lm, i, KeypointName::LeftHip) + need(lm, i, KeypointName::RightHip));
    out[i] = (need(lm, i, j.wrist) - mid).norm();
  }
  return make_series(lm, std::move(out), FeatureName::WristToHipMid, side);
}

const std::vector<FeatureKey>& standard_feature_keys() {
  static const std::vector<FeatureKey> keys = {
      {FeatureName::StepLength, SideLabel::Left},     {FeatureName::StepLength, SideLabel::Right},
      {FeatureName::KneeRotation, SideLabel::Left},   {FeatureName::KneeRotation, SideLabel::Right},
      {FeatureName::TrunkRotation, SideLabel::Bilateral},
      {FeatureName::WristToHipMid, SideLabel::Left},  {FeatureName::WristToHipMid, SideLabel::Right},
  };
  return keys;
}

const TimeSeries& GaitFeatureSet::at(FeatureName feature, SideLabel side) const {
  const auto it = signals.find({feature, side});
  if (it == signals.end()) fail(Errc::InvalidArgument, "feature set has no " + feature_key(feature, side));
  return it->second;
}

GaitFeatureSet extract_all(const LandmarkFrames& lm, const TrialId& trial) {
  GaitFeatureSet set;
  set.trial = trial;
  set.source = lm.source;
  for (const auto& [feature, side] : standard_feature_keys()) {
    try {
      switch (feature) {
        case FeatureName::StepLength: set.signals.emplace(FeatureKey{feature, side}, step_length_signal(lm, side)); break;
        case FeatureName::KneeRotation: set.signals.emplace(FeatureKey{feature, side}, knee_rotation_signal(lm, side)); break;
        case FeatureName::TrunkRotation: set.signals.emplace(FeatureKey{feature, side}, trunk_rotation_signal(lm)); break;
        case FeatureName::WristToHipMid: set.signals.emplace(FeatureKey{feature, side}, wrist_hipmid_signal(lm, side)); break;
      }
    } catch (const Error& e) {
      throw e.with_context({.stage = "features",
                            .trial = trial.str(),
                            .feature = std::string(to_string(feature)),
                            .side = std::string(to_string(side)),
                            .view = std::string(to_string(lm.source))});
    }
  }
  return set;
}

GaitFeatureSet extract_all(const PoseSequence& seq, const TrialId& trial, double sample_rate_hz) {
  return extract_all(to_landmarks(seq, sample_rate_hz), trial);
}

GaitFeatureSet extract_all(const MarkerSequence& seq, const MarkerMap& map, const TrialId& trial,
                           double sample_rate_hz) {
  return extract_all(to_landmarks(seq, map, sample_rate_hz), trial);
}

}  // namespace gaitview
