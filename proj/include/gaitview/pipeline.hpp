#pragma once

#include "gaitview/features.hpp"
#include "gaitview/filter.hpp"
#include "gaitview/ingest.hpp"
#include "gaitview/metrics.hpp"
#include "gaitview/stats.hpp"
#include "gaitview/synth.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gaitview {

std::string_view version() noexcept;

struct Manifest {
  std::filesystem::path directory;     // data paths are relative to this
  std::vector<DatasetEntry> entries;   // sorted by (trial, source)
  std::optional<std::uint64_t> seed;   // from a "# ... seed=N" comment, if any
};

/// Reads `subject,trial,source,path` rows; lines starting with '#' are comments.
Manifest read_manifest(const std::filesystem::path& path);

struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path out_dir;
  FilterSpec filter;
  MetricConfig metrics;
  GapFillOptions gaps;
  std::optional<std::filesystem::path> marker_map;
  std::vector<FeatureName> features{FeatureName::StepLength, FeatureName::KneeRotation, FeatureName::TrunkRotation,
                                    FeatureName::WristToHipMid};
  std::vector<SideLabel> sides{SideLabel::Left, SideLabel::Right};
  std::vector<MetricName> metric_names{MetricName::Dtw, MetricName::Mcc, MetricName::Kld, MetricName::Ie};
  double alpha = 0.05;
  double pca_threshold = 0.95;
  bool filter_features = false;  // also low-pass the derived feature signals
  bool pca_per_subject = false;
  bool export_pca = false;

  void validate() const;
  /// Feature keys selected by `features` and `sides`, in standard order.
  std::vector<FeatureKey> selected_keys() const;
};

/// Output file name -> content. Names are relative to the output directory.
struct ReportBundle {
  std::map<std::string, std::string> files;
};

inline constexpr std::string_view kMetricRecordsFile = "metric_records.csv";
inline constexpr std::string_view kPcaSummaryFile = "pca_summary.csv";
inline constexpr std::string_view kRadarFile = "radar.json";
inline constexpr std::string_view kStatsJsonFile = "stats.json";
inline constexpr std::string_view kMetadataFile = "run_metadata.json";
inline constexpr std::string_view kRecommendationsFile = "recommendations.csv";
inline constexpr std::string_view kStatsHeader =
    "metric,frontal_mean,frontal_sd,lateral_mean,lateral_sd,p_value,cliffs_delta,effect_label,winner";
inline constexpr std::string_view kMetricRecordsHeader =
    "subject,trial,feature,side,view,dtw,mcc,mcc_lag,kld,ie_2d,ie_3d";
inline constexpr std::string_view kPcaSummaryHeader = "group,initial_dim,k,explained_ratio";
inline constexpr std::string_view kRecommendationsHeader = "feature,side,recommended_view,rationale";

std::string stats_file_name(FeatureName feature);
/// "DTW (L)", "DTW (R)", or plain "DTW" for bilateral features.
std::string stat_row_label(MetricName metric, SideLabel side);

/// Everything `analyze` produces, before serialization.
struct AnalysisResult {
  std::vector<MetricRecord> records;
  std::vector<StatResult> stats;
  struct PcaGroup {
    std::string group;
    std::size_t initial_dim = 0;
    std::size_t k = 0;
    double explained_ratio = 0.0;
    std::optional<std::string> scores_csv;
  };
  std::vector<PcaGroup> pca;
};

AnalysisResult analyze(const RunConfig& cfg);
ReportBundle render_report(const RunConfig& cfg, const Manifest& manifest, const AnalysisResult& result);

/// Writes every file of the bundle; on failure removes what it wrote.
void write_bundle(const ReportBundle& bundle, const std::filesystem::path& out_dir);

/// analyze + render + write.
ReportBundle run_analyze(const RunConfig& cfg);

/// Radar values for one pair of view means: the better one maps to 1, the
/// worse to 0; equal means map both to 1. IE treats higher as better.
std::pair<double, double> radar_pair(MetricName metric, double frontal_mean, double lateral_mean);

struct Recommendation {
  FeatureName feature = FeatureName::StepLength;
  SideLabel side = SideLabel::Left;
  Winner view = Winner::Tie;
  std::vector<std::string> rationale;  // contributing rows, e.g. "DTW:lateral(p=0.0021)"
};

/// Plurality vote over the DTW/MCC/KLD rows with p < alpha. No significant
/// rows, or equal votes, give Tie.
std::vector<Recommendation> recommend_views(const std::vector<StatResult>& stats, double alpha);

/// Reads the stats of a completed analyze run. Throws NotAnalyzed when the
/// outputs are missing.
std::vector<StatResult> load_stats(const std::filesystem::path& analyze_dir);

/// Recommendations for `analyze_dir`, also written to recommendations.csv.
/// Uses the analyze run's alpha unless one is given.
std::vector<Recommendation> run_recommend(const std::filesystem::path& analyze_dir,
                                          std::optional<double> alpha = std::nullopt);

}  // namespace gaitview
