// gaitview command-line interface: synth, analyze, recommend, version.

#include "gaitview/error.hpp"
#include "gaitview/pipeline.hpp"
#include "gaitview/synth.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

using namespace gaitview;

template <typename T, typename Parse>
std::vector<T> parse_list(const std::vector<std::string>& names, Parse parse, const char* what) {
  std::vector<T> out;
  for (const auto& n : names) {
    const auto v = parse(n);
    if (!v) throw CLI::ValidationError(what, "unknown value '" + n + "'");
    out.push_back(*v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Score 2D pose-estimation gait signals against 3D motion capture and compare camera views."};
  app.set_config("--config", "", "INI/TOML file with option values; flags override it");
  app.require_subcommand(1);

  // synth
  DatasetOptions synth;
  std::string synth_out;
  auto* cmd_synth = app.add_subcommand("synth", "Write a synthetic paired dataset (3D markers + two camera views)");
  cmd_synth->add_option("--subjects", synth.subjects, "Number of subjects")->capture_default_str()->check(CLI::PositiveNumber);
  cmd_synth->add_option("--frames", synth.base.n_frames, "Frames per trial")->capture_default_str()->check(CLI::Range(2, 1000000));
  cmd_synth->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  cmd_synth->add_option("--noise-sd", synth.pixel_noise_sd, "Pixel noise sd added to the projections")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd_synth->add_option("--marker-noise-sd", synth.base.noise_sd, "Marker noise sd (mm)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd_synth->add_option("--lateral-tilt", synth.views.lateral_tilt_deg, "Lateral camera downward tilt (deg)")
      ->capture_default_str();
  cmd_synth->add_option("--out", synth_out, "Output directory")->required();

  // analyze
  RunConfig run;
  std::string manifest, out_dir, marker_map;
  std::vector<std::string> features, sides, metrics;
  std::string correlation = "raw";
  bool no_normalize = false;
  auto* cmd_analyze = app.add_subcommand("analyze", "Run the metric and statistics pipeline on a dataset");
  cmd_analyze->add_option("--manifest", manifest, "Dataset manifest.csv")->required();
  cmd_analyze->add_option("--out", out_dir, "Output directory")->envname("GAITVIEW_OUT")->required();
  cmd_analyze->add_option("--marker-map", marker_map, "Marker-to-keypoint map file");
  cmd_analyze->add_option("--cutoff-hz", run.filter.cutoff_hz, "Low-pass cutoff")->capture_default_str();
  cmd_analyze->add_option("--sample-rate", run.filter.sample_rate_hz, "Sampling rate of every input")->capture_default_str();
  cmd_analyze->add_option("--filter-order", run.filter.order, "Net forward-backward filter order (even)")->capture_default_str();
  cmd_analyze->add_flag("--filter-features", run.filter_features, "Also low-pass the derived feature signals");
  cmd_analyze->add_option("--conf-threshold", run.gaps.conf_threshold, "Keypoints below this confidence are gaps")
      ->capture_default_str();
  cmd_analyze->add_option("--max-gap", run.gaps.max_gap, "Longest interpolated gap (frames)")->capture_default_str();
  cmd_analyze->add_option("--bins", run.metrics.histogram_bins, "Histogram bins for KLD and IE")->capture_default_str();
  cmd_analyze->add_option("--log-base", run.metrics.log_base, "Logarithm base for KLD and IE")->capture_default_str();
  cmd_analyze->add_option("--epsilon", run.metrics.smoothing_epsilon, "KLD smoothing mass")->capture_default_str();
  cmd_analyze->add_flag("--no-normalize", no_normalize, "Compare raw signals instead of z-normalized ones");
  cmd_analyze->add_option("--correlation", correlation, "Cross-correlation mode")
      ->check(CLI::IsMember({"raw", "pearson"}))
      ->capture_default_str();
  cmd_analyze->add_option("--features", features, "Subset of step_length,knee_rotation,trunk_rotation,wrist_hipmid")
      ->delimiter(',');
  cmd_analyze->add_option("--sides", sides, "Subset of left,right")->delimiter(',');
  cmd_analyze->add_option("--metrics", metrics, "Subset of DTW,MCC,KLD,IE")->delimiter(',');
  cmd_analyze->add_option("--alpha", run.alpha, "Significance level")->capture_default_str();
  cmd_analyze->add_option("--pca-threshold", run.pca_threshold, "Explained variance to retain")->capture_default_str();
  cmd_analyze->add_flag("--pca-per-subject", run.pca_per_subject, "Fit PCA per trial instead of on pooled frames");
  cmd_analyze->add_flag("--export-pca", run.export_pca, "Write the reduced matrices as pca_<group>.csv");

  // recommend
  std::string rec_dir;
  double rec_alpha = 0.0;
  auto* cmd_recommend = app.add_subcommand("recommend", "Per-feature camera-view recommendation from analyze outputs");
  cmd_recommend->add_option("--dir", rec_dir, "Directory written by analyze")->envname("GAITVIEW_OUT")->required();
  auto* alpha_opt = cmd_recommend->add_option("--alpha", rec_alpha, "Significance level (default: the analyze run's)");

  app.add_subcommand("version", "Print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*cmd_synth) {
      const auto entries = make_paired_dataset(synth, synth_out);
      std::cout << "wrote " << entries.size() << " data files and " << kManifestFile << " to " << synth_out << '\n';
    } else if (*cmd_analyze) {
      run.manifest = manifest;
      run.out_dir = out_dir;
      if (!marker_map.empty()) run.marker_map = marker_map;
      run.metrics.normalize = !no_normalize;
      run.metrics.correlation = correlation == "pearson" ? CorrelationMode::Pearson : CorrelationMode::Raw;
      if (!features.empty()) run.features = parse_list<FeatureName>(features, parse_feature, "--features");
      if (!sides.empty()) run.sides = parse_list<SideLabel>(sides, parse_side, "--sides");
      if (!metrics.empty()) run.metric_names = parse_list<MetricName>(metrics, parse_metric, "--metrics");
      const auto bundle = run_analyze(run);
      std::cout << "wrote " << bundle.files.size() << " files to " << out_dir << '\n';
    } else if (*cmd_recommend) {
      const auto recs = run_recommend(rec_dir, alpha_opt->count() ? std::optional(rec_alpha) : std::nullopt);
      for (const auto& r : recs) {
        std::cout << feature_key(r.feature, r.side) << ": " << (r.view == Winner::Tie ? "tie" : to_string(r.view));
        if (!r.rationale.empty()) {
          std::cout << " (";
          for (std::size_t i = 0; i < r.rationale.size(); ++i) std::cout << (i ? ", " : "") << r.rationale[i];
          std::cout << ')';
        }
        std::cout << '\n';
      }
    } else {
      std::cout << "gaitview " << version() << '\n';
    }
  } catch (const CLI::ValidationError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "gaitview: error: " << e.what();
    if (e.line) std::cerr << " (line " << e.line << ", column " << e.column << ")";
    std::cerr << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gaitview: error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
