#include "gaitview/ingest.hpp"

#include "gaitview/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

namespace gaitview {

namespace {

constexpr std::array<std::string_view, kKeypointCount> kKeypointNames = {
    "nose",          "left_eye",       "right_eye",  "left_ear",    "right_ear",  "left_shoulder",
    "right_shoulder", "left_elbow",    "right_elbow", "left_wrist",  "right_wrist", "left_hip",
    "right_hip",     "left_knee",      "right_knee", "left_ankle",  "right_ankle",
};

[[noreturn]] void parse_error(std::size_t line, std::size_t column, const std::string& reason) {
  Error err(Errc::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + reason);
  err.line = line;
  err.column = column;
  throw err;
}

[[noreturn]] void positioned(Errc code, std::size_t line, const std::string& reason) {
  Error err(code, "line " + std::to_string(line) + ": " + reason);
  err.line = line;
  throw err;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

double parse_real(std::string_view field, std::size_t line, std::size_t column) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc{} || ptr != last)
    parse_error(line, column, "expected a number, got '" + std::string(field) + "'");
  if (!std::isfinite(value)) parse_error(line, column, "non-finite value");
  return value;
}

long parse_integer(std::string_view field, std::size_t line, std::size_t column) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
    parse_error(line, column, "expected an integer, got '" + std::string(field) + "'");
  return value;
}

struct Row {
  std::size_t line;
  long frame;
  double time;
  std::string name;
  std::array<double, 3> values;
};

// Shared reader for both CSV schemas: six columns, the third a name.
std::vector<Row> read_rows(std::istream& in, std::string_view header) {
  std::vector<Row> rows;
  std::string raw;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != header) parse_error(line_no, 1, "expected header '" + std::string(header) + "'");
      saw_header = true;
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() < 6) parse_error(line_no, fields.size() + 1, "missing column");
    if (fields.size() > 6) parse_error(line_no, 7, "unexpected extra column");
    Row row;
    row.line = line_no;
    row.frame = parse_integer(fields[0], line_no, 1);
    row.time = parse_real(fields[1], line_no, 2);
    if (fields[2].empty()) parse_error(line_no, 3, "empty name");
    row.name = std::string(fields[2]);
    for (std::size_t c = 0; c < 3; ++c) row.values[c] = parse_real(fields[3 + c], line_no, 4 + c);
    rows.push_back(std::move(row));
  }
  if (!saw_header) parse_error(1, 1, "missing header");
  return rows;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::IoError, "cannot open " + path.string());
  return in;
}

}  // namespace

std::string_view to_string(KeypointName kp) noexcept { return kKeypointNames[index_of(kp)]; }

std::optional<KeypointName> parse_keypoint(std::string_view text) noexcept {
  for (std::size_t i = 0; i < kKeypointCount; ++i)
    if (kKeypointNames[i] == text) return static_cast<KeypointName>(i);
  return std::nullopt;
}

std::array<KeypointName, kKeypointCount> all_keypoints() noexcept {
  std::array<KeypointName, kKeypointCount> out{};
  for (std::size_t i = 0; i < kKeypointCount; ++i) out[i] = static_cast<KeypointName>(i);
  return out;
}

std::optional<std::size_t> MarkerSequence::marker_index(std::string_view name) const {
  auto it = std::lower_bound(marker_names.begin(), marker_names.end(), name);
  if (it == marker_names.end() || *it != name) return std::nullopt;
  return static_cast<std::size_t>(it - marker_names.begin());
}

MarkerMap MarkerMap::defaults() {
  MarkerMap map;
  auto set = [&map](KeypointName kp, std::string name) { map.roles[index_of(kp)] = std::move(name); };
  set(KeypointName::LeftShoulder, "LSHO");
  set(KeypointName::RightShoulder, "RSHO");
  set(KeypointName::LeftElbow, "LELB");
  set(KeypointName::RightElbow, "RELB");
  set(KeypointName::LeftWrist, "LWRA");
  set(KeypointName::RightWrist, "RWRA");
  set(KeypointName::LeftHip, "LHIP");
  set(KeypointName::RightHip, "RHIP");
  set(KeypointName::LeftKnee, "LKNE");
  set(KeypointName::RightKnee, "RKNE");
  set(KeypointName::LeftAnkle, "LANK");
  set(KeypointName::RightAnkle, "RANK");
  return map;
}

PoseSequence parse_pose_csv(std::istream& in, ViewLabel view) {
  const auto rows = read_rows(in, kPoseCsvHeader);
  std::map<long, PoseFrame> frames;
  std::map<long, std::size_t> first_line;
  for (const auto& row : rows) {
    const auto kp = parse_keypoint(row.name);
    if (!kp) positioned(Errc::SchemaError, row.line, "unknown keypoint '" + row.name + "'");
    const double conf = row.values[2];
    if (conf < 0.0 || conf > 1.0) positioned(Errc::SchemaError, row.line, "confidence outside [0,1]");
    auto [it, inserted] = frames.try_emplace(row.frame);
    PoseFrame& frame = it->second;
    if (inserted) {
      frame.frame_index = row.frame;
      frame.time_s = row.time;
      first_line[row.frame] = row.line;
    } else if (frame.time_s != row.time) {
      positioned(Errc::SchemaError, row.line,
                 "time_s differs from line " + std::to_string(first_line[row.frame]) + " for the same frame");
    }
    auto& slot = frame[*kp];
    if (slot) positioned(Errc::DuplicateError, row.line, "duplicate keypoint '" + row.name + "' in frame " +
                                                             std::to_string(row.frame));
    slot = Keypoint{row.values[0], row.values[1], conf};
  }
  PoseSequence seq;
  seq.view = view;
  seq.frames.reserve(frames.size());
  for (auto& [_, frame] : frames) seq.frames.push_back(std::move(frame));
  return seq;
}

PoseSequence parse_pose_csv(const std::filesystem::path& path, ViewLabel view) {
  auto in = open_input(path);
  try {
    return parse_pose_csv(in, view);
  } catch (const Error& e) {
    throw e.with_context({.stage = "ingest " + path.filename().string()});
  }
}

MarkerSequence parse_marker_csv(std::istream& in) {
  const auto rows = read_rows(in, kMarkerCsvHeader);
  struct Pending {
    double time;
    std::size_t line;
    std::map<std::string, Point3> markers;
  };
  std::map<long, Pending> frames;
  for (const auto& row : rows) {
    auto [it, inserted] = frames.try_emplace(row.frame, Pending{row.time, row.line, {}});
    if (!inserted && it->second.time != row.time)
      positioned(Errc::SchemaError, row.line,
                 "time_s differs from line " + std::to_string(it->second.line) + " for the same frame");
    auto [mit, fresh] = it->second.markers.try_emplace(row.name, Point3{row.values[0], row.values[1], row.values[2]});
    if (!fresh)
      positioned(Errc::DuplicateError, row.line,
                 "duplicate marker '" + row.name + "' in frame " + std::to_string(row.frame));
  }

  MarkerSequence seq;
  if (frames.empty()) return seq;
  for (const auto& [name, _] : frames.begin()->second.markers) seq.marker_names.push_back(name);
  for (auto& [index, pending] : frames) {
    const bool same_set =
        pending.markers.size() == seq.marker_names.size() &&
        std::equal(seq.marker_names.begin(), seq.marker_names.end(), pending.markers.begin(),
                   [](const std::string& a, const auto& kv) { return a == kv.first; });
    if (!same_set)
      positioned(Errc::SchemaError, pending.line,
                 "marker set of frame " + std::to_string(index) + " differs from the first frame");
    MarkerFrame frame;
    frame.frame_index = index;
    frame.time_s = pending.time;
    frame.positions.reserve(pending.markers.size());
    for (const auto& [_, p] : pending.markers) frame.positions.push_back(p);
    seq.frames.push_back(std::move(frame));
  }
  return seq;
}

MarkerSequence parse_marker_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_marker_csv(in);
  } catch (const Error& e) {
    throw e.with_context({.stage = "ingest " + path.filename().string()});
  }
}

MarkerMap parse_marker_map(std::istream& in) {
  MarkerMap map;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) parse_error(line_no, 1, "expected 'role = marker'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) parse_error(line_no, eq + 1, "empty key or value");
    if (key == "vertical_axis") {
      if (value == "x") map.vertical_axis = 0;
      else if (value == "y") map.vertical_axis = 1;
      else if (value == "z") map.vertical_axis = 2;
      else positioned(Errc::SchemaError, line_no, "vertical_axis must be x, y or z");
      continue;
    }
    const auto kp = parse_keypoint(key);
    if (!kp) positioned(Errc::SchemaError, line_no, "unknown anatomical role '" + std::string(key) + "'");
    map.roles[index_of(*kp)] = std::string(value);
  }
  return map;
}

MarkerMap parse_marker_map(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_marker_map(in);
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  (void)ec;
  return std::string(buf, ptr);
}

void write_pose_csv(std::ostream& out, const PoseSequence& seq) {
  out << kPoseCsvHeader << '\n';
  for (const auto& frame : seq.frames) {
    const std::string prefix = std::to_string(frame.frame_index) + ',' + format_double(frame.time_s) + ',';
    for (std::size_t k = 0; k < kKeypointCount; ++k) {
      const auto& kp = frame.keypoints[k];
      if (!kp) continue;
      out << prefix << kKeypointNames[k] << ',' << format_double(kp->x) << ',' << format_double(kp->y) << ','
          << format_double(kp->conf) << '\n';
    }
  }
}

void write_marker_csv(std::ostream& out, const MarkerSequence& seq) {
  out << kMarkerCsvHeader << '\n';
  for (const auto& frame : seq.frames) {
    const std::string prefix = std::to_string(frame.frame_index) + ',' + format_double(frame.time_s) + ',';
    for (std::size_t m = 0; m < seq.marker_names.size(); ++m) {
      const auto& p = frame.positions[m];
      out << prefix << seq.marker_names[m] << ',' << format_double(p.x) << ',' << format_double(p.y) << ','
          << format_double(p.z) << '\n';
    }
  }
}

PoseSequence fill_gaps(const PoseSequence& seq, const GapFillOptions& opts) {
  if (opts.conf_threshold < 0.0 || opts.conf_threshold > 1.0)
    fail(Errc::InvalidArgument, "confidence threshold must lie in [0,1]");
  PoseSequence out = seq;
  const std::size_t n = seq.frames.size();
  for (std::size_t k = 0; k < kKeypointCount; ++k) {
    bool ever_present = false;
    std::vector<bool> good(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& kp = seq.frames[i].keypoints[k];
      ever_present = ever_present || kp.has_value();
      good[i] = kp && kp->conf >= opts.conf_threshold;
    }
    if (!ever_present) continue;

    std::size_t i = 0;
    while (i < n) {
      if (good[i]) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j < n && !good[j]) ++j;
      const std::size_t gap = j - i;
      const bool at_boundary = i == 0 || j == n;
      if (at_boundary || gap > opts.max_gap) {
        fail(Errc::GapTooLarge, std::string(kKeypointNames[k]) + " frames " +
                                    std::to_string(seq.frames[i].frame_index) + ".." +
                                    std::to_string(seq.frames[j - 1].frame_index) + " (" + std::to_string(gap) +
                                    " frames" + (at_boundary ? ", touches sequence boundary" : "") + ")");
      }
      const auto& before = seq.frames[i - 1];
      const auto& after = seq.frames[j];
      const Keypoint& a = *before.keypoints[k];
      const Keypoint& b = *after.keypoints[k];
      const double span = static_cast<double>(after.frame_index - before.frame_index);
      for (std::size_t g = i; g < j; ++g) {
        const double t = static_cast<double>(seq.frames[g].frame_index - before.frame_index) / span;
        out.frames[g].keypoints[k] = Keypoint{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), opts.conf_threshold};
      }
      i = j;
    }
  }
  return out;
}

}  // namespace gaitview
