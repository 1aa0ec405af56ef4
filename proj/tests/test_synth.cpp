#include "gaitview/features.hpp"
#include "gaitview/synth.hpp"

#include "support.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace gaitview;
namespace fs = std::filesystem;

namespace {

Eigen::Vector3d at(const MarkerSequence& seq, std::size_t frame, const std::string& name) {
  const auto& p = seq.frames[frame].positions[*seq.marker_index(name)];
  return {p.x, p.y, p.z};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gaitview_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("generate_gait") {
  GaitModelParams p;
  SUBCASE("noise-free output ignores the seed") {
    GaitModelParams q = p;
    q.seed = 12345;
    CHECK(generate_gait(p) == generate_gait(q));
  }
  SUBCASE("noisy output depends only on the seed") {
    GaitModelParams q = p;
    q.noise_sd = 1.0;
    GaitModelParams r = q;
    r.seed = 2;
    CHECK(generate_gait(q) == generate_gait(q));
    CHECK_FALSE(generate_gait(q) == generate_gait(r));
  }
  SUBCASE("left and right legs are half a cycle apart") {
    p.n_frames = 300;
    const auto seq = generate_gait(p);
    const std::size_t half = 50;  // 100 Hz, 1 Hz cycle
    for (std::size_t i = 0; i + half < p.n_frames; ++i) {
      const Eigen::Vector3d pelvis_shift(p.walking_speed_mps * 1000.0 * 0.5, 0.0, 0.0);
      const Eigen::Vector3d l = at(seq, i + half, "LANK") - pelvis_shift;
      const Eigen::Vector3d r = at(seq, i, "RANK");
      CHECK(std::fabs(l.x() - r.x()) < 1e-9);
      CHECK(std::fabs(l.z() - r.z()) < 1e-9);
      CHECK(std::fabs(l.y() + r.y()) < 1e-9);  // mirrored across the walking line
    }
  }
  SUBCASE("pelvis travels speed times duration") {
    const auto seq = generate_gait(p);
    // The hip midpoint sits on the pelvis centre at every frame.
    const double travelled = 0.5 * (at(seq, p.n_frames - 1, "LHIP") + at(seq, p.n_frames - 1, "RHIP")).x() -
                        0.5 * (at(seq, 0, "LHIP") + at(seq, 0, "RHIP")).x();
    CHECK(std::fabs(travelled - p.walking_speed_mps * p.duration_s() * 1000.0) < 1e-9);
  }
  SUBCASE("marker set") {
    const auto seq = generate_gait(p);
    CHECK(seq.marker_names.size() == 14);
    CHECK(seq.frames.size() == 169);
    CHECK(std::is_sorted(seq.marker_names.begin(), seq.marker_names.end()));
  }
  SUBCASE("invalid parameters") {
    GaitModelParams bad = p;
    bad.n_frames = 1;
    CHECK_ERRC(generate_gait(bad), Errc::InvalidArgument);
    bad = p;
    bad.thigh_length = 0.0;
    CHECK_ERRC(generate_gait(bad), Errc::InvalidArgument);
    bad = p;
    bad.cycle_hz = -1.0;
    CHECK_ERRC(generate_gait(bad), Errc::InvalidArgument);
  }
}

TEST_CASE("pinhole projection") {
  const auto cam = CameraModel::looking(ViewLabel::Lateral, {0, 0, 1}, {0, 1, 0}, 0.0);
  SUBCASE("optical axis lands on the principal point") {
    for (double depth : {0.5, 2.0, 30.0}) {
      const auto px = project_point(cam, {0, depth, 1});
      CHECK(px.x() == doctest::Approx(960.0));
      CHECK(px.y() == doctest::Approx(540.0));
    }
  }
  SUBCASE("lateral offset") {
    // Looking along +y, image right is +x.
    const double X = 0.3, Z = 2.5;
    const auto px = project_point(cam, {X, Z, 1});
    CHECK(px.x() == doctest::Approx(960.0 + 1000.0 * X / Z));
    CHECK(px.y() == doctest::Approx(540.0));
    const auto up = project_point(cam, {0, Z, 1.2});
    CHECK(up.y() == doctest::Approx(540.0 - 1000.0 * 0.2 / Z));
  }
  SUBCASE("behind the camera") {
    CHECK_ERRC(project_point(cam, {0, -1, 1}), Errc::BehindCamera);
    CHECK_ERRC(project_point(cam, {0, 0, 1}), Errc::BehindCamera);
  }
  SUBCASE("scaling the world about the camera centre") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto tilted = CameraModel::looking(ViewLabel::Frontal, {4, 0.5, 1.2}, {-1, 0.2, 0}, 10.0);
    for (int rep = 0; rep < 50; ++rep) {
      const Eigen::Vector3d p(u(rng), u(rng), 1.0 + u(rng));
      const Eigen::Vector3d scaled = tilted.position + 3.7 * (p - tilted.position);
      CHECK((project_point(tilted, p) - project_point(tilted, scaled)).norm() < 1e-6);
    }
  }
  SUBCASE("orientation is orthonormal") {
    const auto tilted = CameraModel::looking(ViewLabel::Frontal, {4, 0, 1.2}, {-1, 0, 0}, 10.0);
    CHECK((tilted.rotation * tilted.rotation.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK_NOTHROW(tilted.validate());
    CameraModel bad = tilted;
    bad.rotation(0, 0) += 0.1;
    CHECK_ERRC(bad.validate(), Errc::InvalidArgument);
    bad = tilted;
    bad.focal_px = 0.0;
    CHECK_ERRC(bad.validate(), Errc::InvalidArgument);
  }
}

TEST_CASE("preset views") {
  const PresetViews v;
  CHECK(v.frontal_distance_m == 3.0);
  CHECK(v.frontal_height_m == 1.2);
  CHECK(v.frontal_tilt_deg == 10.0);
  CHECK(v.lateral_distance_m == 2.5);
  CHECK(v.lateral_height_m == 0.9);
  CHECK(v.lateral_tilt_deg == 0.0);
  const auto f = v.frontal({1, 0, 0});
  const auto l = v.lateral({1, 0, 0});
  CHECK(f.position.isApprox(Eigen::Vector3d(4, 0, 1.2)));
  CHECK(l.position.isApprox(Eigen::Vector3d(1, -2.5, 0.9)));
  CHECK(f.focal_px == 1000.0);
  CHECK(f.width_px == 1920);
  CHECK(f.height_px == 1080);
}

TEST_CASE("project maps markers onto the keypoint schema") {
  const GaitModelParams p;
  const auto seq = generate_gait(p);
  const Eigen::Vector3d centre(p.walking_speed_mps * p.duration_s() / 2.0, 0.0, 0.0);
  const auto pose = project(seq, PresetViews{}.lateral(centre), {.confidence = 0.8});
  CHECK(pose.view == ViewLabel::Lateral);
  REQUIRE(pose.frames.size() == seq.frames.size());
  for (KeypointName kp : all_keypoints()) {
    REQUIRE(pose.frames[10][kp].has_value());
    CHECK(pose.frames[10][kp]->conf == 0.8);
  }
  const auto ankle = project_point(PresetViews{}.lateral(centre), at(seq, 10, "LANK") / 1000.0);
  CHECK(pose.frames[10][KeypointName::LeftAnkle]->x == doctest::Approx(ankle.x()));

  MarkerSequence behind = seq;
  for (auto& f : behind.frames) f.positions[0].y = -5000.0;  // far behind the lateral camera
  CHECK_ERRC(project(behind, PresetViews{}.lateral(centre)), Errc::BehindCamera);
}

TEST_CASE("lateral view: inter-ankle pixel distance is monotone in the 3D distance") {
  GaitModelParams p;
  p.n_frames = 60;
  const auto seq = generate_gait(p);
  const Eigen::Vector3d centre(p.walking_speed_mps * p.duration_s() / 2.0, 0.0, 0.0);
  const auto cam = PresetViews{}.lateral(centre);
  // Place both ankles at the walker's mid-line depth and vary the spacing.
  std::vector<double> px;
  for (double d = 0.0; d <= 0.8; d += 0.05) {
    const Eigen::Vector3d a(centre.x() - d / 2.0, 0.0, 0.1), b(centre.x() + d / 2.0, 0.0, 0.1);
    px.push_back((project_point(cam, a) - project_point(cam, b)).norm());
  }
  for (std::size_t i = 1; i < px.size(); ++i) CHECK(px[i] > px[i - 1]);
  CHECK(seq.frames.size() == 60);
}

TEST_CASE("frontal view: image trunk angle tracks the 3D rotation") {
  // The 3D rotation is about the vertical; from a frontal camera its image
  // is foreshortened, so only sign and ordering carry over.
  const auto cam = PresetViews{}.frontal({0, 0, 0});
  auto image_angle = [&](double deg) {
    const Eigen::Matrix3d r = Eigen::AngleAxisd(deg * std::numbers::pi / 180.0, Eigen::Vector3d::UnitZ()).toRotationMatrix();
    const Eigen::Vector3d hip_l(0, 0.13, 0.95), hip_r(0, -0.13, 0.95);
    const Eigen::Vector3d sho_l = Eigen::Vector3d(0, 0, 1.45) + r * Eigen::Vector3d(0, 0.19, 0);
    const Eigen::Vector3d sho_r = Eigen::Vector3d(0, 0, 1.45) + r * Eigen::Vector3d(0, -0.19, 0);
    const Eigen::Vector2d h = project_point(cam, hip_r) - project_point(cam, hip_l);
    const Eigen::Vector2d s = project_point(cam, sho_r) - project_point(cam, sho_l);
    return std::atan2(h.x() * s.y() - h.y() * s.x(), h.dot(s)) * 180.0 / std::numbers::pi;
  };
  CHECK(std::fabs(image_angle(0.0)) < 1e-9);
  const double dir = image_angle(10.0) > 0.0 ? 1.0 : -1.0;
  CHECK(std::fabs(image_angle(15.0)) > 0.1);
  double previous = image_angle(-15.0);
  for (double deg = -14.0; deg <= 15.0; deg += 1.0) {
    const double a = image_angle(deg);
    CHECK(dir * a > dir * previous);
    if (deg != 0.0) CHECK((dir * a > 0.0) == (deg > 0.0));
    previous = a;
  }
}

TEST_CASE("make_paired_dataset") {
  DatasetOptions opts;
  opts.subjects = 3;
  opts.seed = 7;
  const fs::path a = scratch("synth_a"), b = scratch("synth_b");
  const auto entries = make_paired_dataset(opts, a);
  make_paired_dataset(opts, b);
  CHECK(entries.size() == 9);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    ++files;
    CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
  }
  CHECK(files == 10);
  CHECK(fs::exists(a / "manifest.csv"));
  CHECK(fs::exists(a / "s03_t01_lateral.csv"));

  SUBCASE("per-subject parameters differ but are reproducible") {
    const auto p1 = subject_params(opts, 1), p2 = subject_params(opts, 2);
    CHECK(p1.walking_speed_mps != p2.walking_speed_mps);
    CHECK(subject_params(opts, 1).walking_speed_mps == p1.walking_speed_mps);
    CHECK(p1.walking_speed_mps >= 1.2 * 0.85);
    CHECK(p1.walking_speed_mps <= 1.2 * 1.15);
  }
  SUBCASE("a different seed changes the data") {
    DatasetOptions other = opts;
    other.seed = 8;
    const fs::path c = scratch("synth_c");
    make_paired_dataset(other, c);
    CHECK(slurp(a / "s01_t01_frontal.csv") != slurp(c / "s01_t01_frontal.csv"));
    fs::remove_all(c);
  }
  SUBCASE("zero subjects") {
    DatasetOptions none = opts;
    none.subjects = 0;
    CHECK_ERRC(make_paired_dataset(none, scratch("synth_none")), Errc::InvalidArgument);
  }
  SUBCASE("unwritable directory") {
    const fs::path blocker = scratch("synth_block");
    std::ofstream(blocker.string()) << "file, not a directory";
    CHECK_ERRC(make_paired_dataset(opts, blocker / "sub"), Errc::IoError);
    fs::remove(blocker);
  }
  fs::remove_all(a);
  fs::remove_all(b);
}
