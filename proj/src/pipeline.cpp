#include "gaitview/pipeline.hpp"

#include "gaitview/error.hpp"
#include "gaitview/pca.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace gaitview {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view version() noexcept { return GAITVIEW_VERSION; }

namespace {

std::string read_text(const fs::path& path, Errc missing = Errc::IoError) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(missing, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Six significant digits for the human-readable tables.
std::string fmt6(double v) {
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

int parse_int(const std::string& text, std::size_t line, std::size_t column) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || v < 1) {
    Error e(Errc::ParseError, "expected a positive integer, got '" + text + "'");
    e.line = line;
    e.column = column;
    throw e;
  }
  return v;
}

}  // namespace

Manifest read_manifest(const fs::path& path) {
  const std::string text = read_text(path);
  Manifest m;
  m.directory = path.parent_path();
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::set<std::pair<TrialId, ViewLabel>> seen;
  const std::regex seed_re(R"(seed=(\d+))");
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (line.front() == '#') {
        std::smatch match;
        if (!m.seed && std::regex_search(line, match, seed_re)) m.seed = std::stoull(match[1].str());
        continue;
      }
      if (!header_seen) {
        if (line != kManifestHeader) {
          Error e(Errc::ParseError, "expected header '" + std::string(kManifestHeader) + "'");
          e.line = line_no;
          e.column = 1;
          throw e;
        }
        header_seen = true;
        continue;
      }
      const auto fields = split(line, ',');
      if (fields.size() != 4) {
        Error e(Errc::ParseError, "expected 4 fields, got " + std::to_string(fields.size()));
        e.line = line_no;
        e.column = std::min<std::size_t>(fields.size() + 1, 4);
        throw e;
      }
      DatasetEntry entry;
      entry.trial = {parse_int(fields[0], line_no, 1), parse_int(fields[1], line_no, 2)};
      const auto source = parse_view(fields[2]);
      if (!source) {
        Error e(Errc::SchemaError, "unknown source '" + fields[2] + "'");
        e.line = line_no;
        e.column = 3;
        throw e;
      }
      entry.source = *source;
      if (fields[3].empty()) {
        Error e(Errc::ParseError, "empty path");
        e.line = line_no;
        e.column = 4;
        throw e;
      }
      entry.file = fields[3];
      if (!seen.insert({entry.trial, entry.source}).second) {
        Error e(Errc::DuplicateError, "duplicate " + std::string(to_string(entry.source)) + " entry for " +
                                          entry.trial.str());
        e.line = line_no;
        throw e;
      }
      m.entries.push_back(std::move(entry));
    }
    if (!header_seen) fail(Errc::ParseError, "manifest has no header");
  } catch (const Error& e) {
    throw e.with_context({.stage = "manifest " + path.filename().string()});
  }
  std::sort(m.entries.begin(), m.entries.end(), [](const DatasetEntry& a, const DatasetEntry& b) {
    return std::tie(a.trial, a.source) < std::tie(b.trial, b.source);
  });
  return m;
}

void RunConfig::validate() const {
  filter.validate();
  metrics.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) fail(Errc::InvalidArgument, "alpha must lie in (0, 1)");
  if (!(pca_threshold > 0.0 && pca_threshold <= 1.0)) fail(Errc::InvalidArgument, "pca threshold must lie in (0, 1]");
  if (features.empty()) fail(Errc::InvalidArgument, "feature selection is empty");
  if (sides.empty()) fail(Errc::InvalidArgument, "side selection is empty");
  if (metric_names.empty()) fail(Errc::InvalidArgument, "metric selection is empty");
  for (SideLabel s : sides)
    if (s == SideLabel::Bilateral) fail(Errc::InvalidArgument, "side selection takes left and/or right");
  if (!fs::is_regular_file(manifest)) fail(Errc::IoError, "manifest not found: " + manifest.string());
  if (marker_map && !fs::is_regular_file(*marker_map))
    fail(Errc::IoError, "marker map not found: " + marker_map->string());
  if (out_dir.empty()) fail(Errc::InvalidArgument, "output directory is required");
}

std::vector<FeatureKey> RunConfig::selected_keys() const {
  std::vector<FeatureKey> keys;
  for (const auto& key : standard_feature_keys()) {
    const bool feature_ok = std::find(features.begin(), features.end(), key.first) != features.end();
    const bool side_ok =
        key.second == SideLabel::Bilateral || std::find(sides.begin(), sides.end(), key.second) != sides.end();
    if (feature_ok && side_ok) keys.push_back(key);
  }
  return keys;
}

std::string stats_file_name(FeatureName feature) { return "stats_" + std::string(to_string(feature)) + ".csv"; }

std::string stat_row_label(MetricName metric, SideLabel side) {
  std::string label(to_string(metric));
  if (side == SideLabel::Left) label += " (L)";
  if (side == SideLabel::Right) label += " (R)";
  return label;
}

namespace {

using Column = std::pair<std::string, std::vector<double>>;

std::vector<Column> coordinate_columns(const PoseSequence& seq) {
  std::vector<Column> cols;
  for (KeypointName kp : all_keypoints()) {
    const bool complete = std::all_of(seq.frames.begin(), seq.frames.end(),
                                      [&](const PoseFrame& f) { return f[kp].has_value(); });
    if (!complete || seq.frames.empty()) continue;
    Column x{std::string(to_string(kp)) + "_x", {}}, y{std::string(to_string(kp)) + "_y", {}};
    for (const auto& f : seq.frames) {
      x.second.push_back(f[kp]->x);
      y.second.push_back(f[kp]->y);
    }
    cols.push_back(std::move(x));
    cols.push_back(std::move(y));
  }
  return cols;
}

std::vector<Column> coordinate_columns(const MarkerSequence& seq) {
  std::vector<Column> cols;
  for (std::size_t m = 0; m < seq.marker_names.size(); ++m) {
    Column x{seq.marker_names[m] + "_x", {}}, y{seq.marker_names[m] + "_y", {}}, z{seq.marker_names[m] + "_z", {}};
    for (const auto& f : seq.frames) {
      x.second.push_back(f.positions[m].x);
      y.second.push_back(f.positions[m].y);
      z.second.push_back(f.positions[m].z);
    }
    cols.push_back(std::move(x));
    cols.push_back(std::move(y));
    cols.push_back(std::move(z));
  }
  return cols;
}

AnalysisResult::PcaGroup fit_group(const std::string& group, const std::vector<std::vector<Column>>& trials,
                                   const RunConfig& cfg) {
  // Pooled groups keep the columns every trial has, in first-trial order.
  std::vector<std::string> labels;
  for (const auto& [label, values] : trials.front()) {
    const bool everywhere = std::all_of(trials.begin(), trials.end(), [&](const std::vector<Column>& t) {
      return std::any_of(t.begin(), t.end(), [&](const Column& c) { return c.first == label; });
    });
    if (everywhere) labels.push_back(label);
  }
  std::size_t rows = 0;
  for (const auto& t : trials) rows += t.empty() ? 0 : t.front().second.size();

  FeatureMatrix m;
  m.column_labels = labels;
  m.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(labels.size()));
  Eigen::Index row0 = 0;
  for (const auto& t : trials) {
    Eigen::Index n = 0;
    for (std::size_t c = 0; c < labels.size(); ++c) {
      const auto& col = std::find_if(t.begin(), t.end(), [&](const Column& x) { return x.first == labels[c]; })->second;
      n = static_cast<Eigen::Index>(col.size());
      for (Eigen::Index r = 0; r < n; ++r) m.values(row0 + r, static_cast<Eigen::Index>(c)) = col[static_cast<std::size_t>(r)];
    }
    row0 += n;
  }

  try {
    const PcaResult fit = pca_fit(m, cfg.pca_threshold);
    AnalysisResult::PcaGroup g{group, labels.size(), fit.k, fit.explained_ratio, std::nullopt};
    if (cfg.export_pca) {
      std::ostringstream csv;
      write_matrix_csv(csv, pca_project(m, fit));
      g.scores_csv = csv.str();
    }
    return g;
  } catch (const Error& e) {
    throw e.with_context({.stage = "pca " + group});
  }
}

}  // namespace

AnalysisResult analyze(const RunConfig& cfg) {
  const Manifest manifest = read_manifest(cfg.manifest);
  const MarkerMap map = cfg.marker_map ? parse_marker_map(*cfg.marker_map) : MarkerMap::defaults();
  const auto keys = cfg.selected_keys();
  const double rate = cfg.filter.sample_rate_hz;

  std::map<TrialId, std::map<ViewLabel, fs::path>> trials;
  for (const auto& e : manifest.entries) trials[e.trial][e.source] = manifest.directory / e.file;

  AnalysisResult result;
  std::map<std::string, std::vector<std::vector<Column>>> pca_inputs;

  auto condition = [&](GaitFeatureSet set) {
    if (cfg.filter_features)
      for (auto& [key, ts] : set.signals) ts = filtfilt(ts, cfg.filter);
    return set;
  };

  for (const auto& [trial, files] : trials) {
    try {
      const auto mocap_it = files.find(ViewLabel::Mocap3D);
      if (mocap_it == files.end()) fail(Errc::SchemaError, "manifest lists no mocap3d file");
      if (files.size() < 2) fail(Errc::SchemaError, "manifest lists no 2D view");

      const MarkerSequence markers = filter_tracks(parse_marker_csv(mocap_it->second), cfg.filter);
      const GaitFeatureSet reference = condition(extract_all(markers, map, trial, rate));
      const std::string suffix = cfg.pca_per_subject ? "_" + trial.str() : "";
      pca_inputs[std::string(to_string(ViewLabel::Mocap3D)) + suffix].push_back(coordinate_columns(markers));

      for (const auto& [view, path] : files) {
        if (view == ViewLabel::Mocap3D) continue;
        PoseSequence pose;
        try {
          pose = filter_tracks(fill_gaps(parse_pose_csv(path, view), cfg.gaps), cfg.filter);
        } catch (const Error& e) {
          throw e.with_context({.stage = "preprocess", .view = std::string(to_string(view))});
        }
        const GaitFeatureSet candidate = condition(extract_all(pose, trial, rate));
        pca_inputs[std::string(to_string(view)) + suffix].push_back(coordinate_columns(pose));
        for (const auto& [feature, side] : keys)
          result.records.push_back(compute_record(trial, feature, side, view, reference.at(feature, side),
                                                  candidate.at(feature, side), cfg.metrics));
      }
    } catch (const Error& e) {
      throw e.with_context({.trial = trial.str()});
    }
  }

  std::set<ViewLabel> views;
  for (const auto& r : result.records) views.insert(r.view);
  if (views.count(ViewLabel::Frontal) && views.count(ViewLabel::Lateral)) {
    for (FeatureName feature : cfg.features) {
      for (MetricName metric : cfg.metric_names)
        for (const auto& key : keys) {
          if (key.first != feature) continue;
          try {
            result.stats.push_back(compare_views(result.records, feature, key.second, metric, cfg.alpha));
          } catch (const Error& e) {
            throw e.with_context({.stage = "stats " + std::string(to_string(metric)),
                                  .feature = std::string(to_string(feature)),
                                  .side = std::string(to_string(key.second))});
          }
        }
    }
  }

  for (const auto& [group, inputs] : pca_inputs) result.pca.push_back(fit_group(group, inputs, cfg));
  return result;
}

std::pair<double, double> radar_pair(MetricName metric, double frontal_mean, double lateral_mean) {
  if (frontal_mean == lateral_mean) return {1.0, 1.0};
  const int dir = better_direction(metric) == 0 ? 1 : better_direction(metric);
  const bool frontal_better = dir * (frontal_mean - lateral_mean) > 0.0;
  return frontal_better ? std::pair{1.0, 0.0} : std::pair{0.0, 1.0};
}

namespace {

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json stat_to_json(const StatResult& s) {
  return json{{"feature", to_string(s.feature)},
              {"side", to_string(s.side)},
              {"metric", to_string(s.metric)},
              {"n_pairs", s.n_pairs},
              {"frontal_mean", s.frontal.mean},
              {"frontal_sd", s.frontal.sd},
              {"lateral_mean", s.lateral.mean},
              {"lateral_sd", s.lateral.sd},
              {"p_value", s.p_value},
              {"cliffs_delta", s.cliffs_delta},
              {"effect_label", to_string(s.effect_label)},
              {"winner", to_string(s.winner)},
              {"shapiro_p_frontal", optional_json(s.shapiro_p_frontal)},
              {"shapiro_p_lateral", optional_json(s.shapiro_p_lateral)}};
}

json config_to_json(const RunConfig& cfg) {
  json features = json::array(), sides = json::array(), metrics = json::array();
  for (auto f : cfg.features) features.push_back(to_string(f));
  for (auto s : cfg.sides) sides.push_back(to_string(s));
  for (auto m : cfg.metric_names) metrics.push_back(to_string(m));
  return json{
      {"filter", {{"cutoff_hz", cfg.filter.cutoff_hz}, {"sample_rate_hz", cfg.filter.sample_rate_hz},
                  {"order", cfg.filter.order}}},
      {"metrics", {{"normalize", cfg.metrics.normalize}, {"histogram_bins", cfg.metrics.histogram_bins},
                   {"log_base", cfg.metrics.log_base}, {"smoothing_epsilon", cfg.metrics.smoothing_epsilon},
                   {"correlation", cfg.metrics.correlation == CorrelationMode::Raw ? "raw" : "pearson"}}},
      {"gap_fill", {{"conf_threshold", cfg.gaps.conf_threshold}, {"max_gap", cfg.gaps.max_gap}}},
      {"marker_map", cfg.marker_map ? hex(fnv1a(read_text(*cfg.marker_map))) : "default"},
      {"features", features},
      {"sides", sides},
      {"metric_names", metrics},
      {"alpha", cfg.alpha},
      {"pca_threshold", cfg.pca_threshold},
      {"filter_features", cfg.filter_features},
      {"pca_per_subject", cfg.pca_per_subject},
      {"export_pca", cfg.export_pca}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

ReportBundle render_report(const RunConfig& cfg, const Manifest& manifest, const AnalysisResult& result) {
  ReportBundle bundle;

  {
    std::ostringstream csv;
    csv << kMetricRecordsHeader << '\n';
    for (const auto& r : result.records)
      csv << r.trial.subject_index << ',' << r.trial.trial_index << ',' << to_string(r.feature) << ','
          << to_string(r.side) << ',' << to_string(r.view) << ',' << fmt6(r.dtw) << ',' << fmt6(r.mcc) << ','
          << r.mcc_lag << ',' << fmt6(r.kld) << ',' << fmt6(r.ie_2d) << ',' << fmt6(r.ie_3d) << '\n';
    bundle.files[std::string(kMetricRecordsFile)] = csv.str();
  }

  for (FeatureName feature : cfg.features) {
    std::ostringstream csv;
    csv << kStatsHeader << '\n';
    for (const auto& s : result.stats) {
      if (s.feature != feature) continue;
      csv << stat_row_label(s.metric, s.side) << ',' << fmt6(s.frontal.mean) << ',' << fmt6(s.frontal.sd) << ','
          << fmt6(s.lateral.mean) << ',' << fmt6(s.lateral.sd) << ',' << fmt6(s.p_value) << ','
          << fmt6(s.cliffs_delta) << ',' << to_string(s.effect_label) << ',' << to_string(s.winner) << '\n';
    }
    bundle.files[stats_file_name(feature)] = csv.str();
  }

  {
    std::ostringstream csv;
    csv << kPcaSummaryHeader << '\n';
    for (const auto& g : result.pca) {
      csv << g.group << ',' << g.initial_dim << ',' << g.k << ',' << fmt6(g.explained_ratio) << '\n';
      if (g.scores_csv) bundle.files["pca_" + g.group + ".csv"] = *g.scores_csv;
    }
    bundle.files[std::string(kPcaSummaryFile)] = csv.str();
  }

  json radar = json::object();
  json stats = json::array();
  json normality = json::array();
  for (const auto& s : result.stats) {
    stats.push_back(stat_to_json(s));
    const auto [f, l] = radar_pair(s.metric, s.frontal.mean, s.lateral.mean);
    const std::string key = feature_key(s.feature, s.side);
    const std::string metric(to_string(s.metric));
    radar[key]["frontal"][metric] = f;
    radar[key]["lateral"][metric] = l;
    radar[key]["means"]["frontal"][metric] = s.frontal.mean;
    radar[key]["means"]["lateral"][metric] = s.lateral.mean;
    normality.push_back({{"feature", to_string(s.feature)},
                         {"side", to_string(s.side)},
                         {"metric", metric},
                         {"shapiro_p_frontal", optional_json(s.shapiro_p_frontal)},
                         {"shapiro_p_lateral", optional_json(s.shapiro_p_lateral)}});
  }
  bundle.files[std::string(kRadarFile)] = dump(radar);
  bundle.files[std::string(kStatsJsonFile)] = dump(stats);

  std::uint64_t input_hash = fnv1a(read_text(cfg.manifest));
  std::set<fs::path> inputs;
  for (const auto& e : manifest.entries) inputs.insert(manifest.directory / e.file);
  for (const auto& p : inputs) input_hash = fnv1a(read_text(p), input_hash);

  std::set<TrialId> trials;
  std::set<int> subjects;
  for (const auto& e : manifest.entries) {
    trials.insert(e.trial);
    subjects.insert(e.trial.subject_index);
  }
  const json config = config_to_json(cfg);
  json outputs = json::array();
  for (const auto& [name, content] : bundle.files) outputs.push_back(name);
  outputs.push_back(kMetadataFile);
  const json metadata{{"version", version()},
                      {"config", config},
                      {"config_hash", hex(fnv1a(config.dump()))},
                      {"input_hash", hex(input_hash)},
                      {"seed", manifest.seed ? json(*manifest.seed) : json(nullptr)},
                      {"subjects", subjects.size()},
                      {"trials", trials.size()},
                      {"records", result.records.size()},
                      {"normality", normality},
                      {"outputs", outputs}};
  bundle.files[std::string(kMetadataFile)] = dump(metadata);
  return bundle;
}

void write_bundle(const ReportBundle& bundle, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) fail(Errc::IoError, "cannot create directory " + out_dir.string());
  std::vector<fs::path> written;
  try {
    for (const auto& [name, content] : bundle.files) {
      const fs::path path = out_dir / name;
      std::ofstream out(path, std::ios::binary | std::ios::trunc);
      if (!out) fail(Errc::IoError, "cannot write " + path.string());
      written.push_back(path);
      out << content;
      out.close();
      if (!out) fail(Errc::IoError, "failed writing " + path.string());
    }
  } catch (...) {
    for (const auto& p : written) fs::remove(p, ec);
    throw;
  }
}

ReportBundle run_analyze(const RunConfig& cfg) {
  cfg.validate();
  const Manifest manifest = read_manifest(cfg.manifest);
  const AnalysisResult result = analyze(cfg);
  ReportBundle bundle = render_report(cfg, manifest, result);
  write_bundle(bundle, cfg.out_dir);
  return bundle;
}

std::vector<Recommendation> recommend_views(const std::vector<StatResult>& stats, double alpha) {
  std::vector<Recommendation> out;
  std::map<FeatureKey, std::size_t> slot;
  for (const auto& s : stats) {
    const FeatureKey key{s.feature, s.side};
    if (!slot.count(key)) {
      slot[key] = out.size();
      out.push_back({s.feature, s.side, Winner::Tie, {}});
    }
  }
  std::map<FeatureKey, std::pair<int, int>> votes;  // frontal, lateral
  for (const auto& s : stats) {
    const int dir = better_direction(s.metric);
    if (dir == 0 || !(s.p_value < alpha) || s.frontal.mean == s.lateral.mean) continue;
    const bool frontal = dir * (s.frontal.mean - s.lateral.mean) > 0.0;
    const FeatureKey key{s.feature, s.side};
    (frontal ? votes[key].first : votes[key].second) += 1;
    out[slot[key]].rationale.push_back(std::string(to_string(s.metric)) + ":" + (frontal ? "frontal" : "lateral") +
                                       "(p=" + fmt6(s.p_value) + ")");
  }
  for (auto& rec : out) {
    const auto [f, l] = votes[{rec.feature, rec.side}];
    rec.view = f > l ? Winner::Frontal : l > f ? Winner::Lateral : Winner::Tie;
  }
  return out;
}

namespace {

MetricName metric_from_json(const json& j) {
  const auto m = parse_metric(j.get<std::string>());
  if (!m) fail(Errc::SchemaError, "unknown metric " + j.get<std::string>());
  return *m;
}

std::optional<double> optional_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json load_json(const fs::path& path) {
  const std::string text = read_text(path, Errc::NotAnalyzed);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::ParseError, path.filename().string() + ": " + e.what());
  }
}

}  // namespace

std::vector<StatResult> load_stats(const fs::path& analyze_dir) {
  if (!fs::is_regular_file(analyze_dir / kStatsJsonFile) || !fs::is_regular_file(analyze_dir / kMetadataFile))
    fail(Errc::NotAnalyzed, "no analyze outputs in " + analyze_dir.string());
  const json stats = load_json(analyze_dir / kStatsJsonFile);
  std::vector<StatResult> out;
  try {
    for (const auto& j : stats) {
      StatResult s;
      const auto feature = parse_feature(j.at("feature").get<std::string>());
      const auto side = parse_side(j.at("side").get<std::string>());
      if (!feature || !side) fail(Errc::SchemaError, "bad feature or side in stats.json");
      s.feature = *feature;
      s.side = *side;
      s.metric = metric_from_json(j.at("metric"));
      s.n_pairs = j.at("n_pairs").get<std::size_t>();
      s.frontal = {j.at("frontal_mean").get<double>(), j.at("frontal_sd").get<double>()};
      s.lateral = {j.at("lateral_mean").get<double>(), j.at("lateral_sd").get<double>()};
      s.p_value = j.at("p_value").get<double>();
      s.cliffs_delta = j.at("cliffs_delta").get<double>();
      s.effect_label = effect_label(s.cliffs_delta);
      const auto w = j.at("winner").get<std::string>();
      s.winner = w == "frontal" ? Winner::Frontal : w == "lateral" ? Winner::Lateral : w == "tie" ? Winner::Tie
                                                                                                  : Winner::NotApplicable;
      s.shapiro_p_frontal = optional_from_json(j.at("shapiro_p_frontal"));
      s.shapiro_p_lateral = optional_from_json(j.at("shapiro_p_lateral"));
      out.push_back(s);
    }
  } catch (const json::exception& e) {
    fail(Errc::SchemaError, std::string("stats.json: ") + e.what());
  }
  return out;
}

std::vector<Recommendation> run_recommend(const fs::path& analyze_dir, std::optional<double> alpha) {
  const auto stats = load_stats(analyze_dir);
  if (!alpha) {
    const json meta = load_json(analyze_dir / kMetadataFile);
    alpha = meta.at("config").at("alpha").get<double>();
  }
  if (!(*alpha > 0.0 && *alpha < 1.0)) fail(Errc::InvalidArgument, "alpha must lie in (0, 1)");
  const auto recs = recommend_views(stats, *alpha);

  std::ostringstream csv;
  csv << kRecommendationsHeader << '\n';
  for (const auto& r : recs) {
    std::string rationale;
    for (const auto& part : r.rationale) rationale += (rationale.empty() ? "" : ";") + part;
    csv << to_string(r.feature) << ',' << to_string(r.side) << ',' << to_string(r.view) << ',' << rationale << '\n';
  }
  write_bundle(ReportBundle{{{std::string(kRecommendationsFile), csv.str()}}}, analyze_dir);
  return recs;
}

}  // namespace gaitview
