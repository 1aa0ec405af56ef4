#pragma once

#include "gaitview/metrics.hpp"
#include "gaitview/signal.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace gaitview {

/// Per-subject scores for two conditions, paired by position.
struct PairedSample {
  std::vector<double> values_a;
  std::vector<double> values_b;

  std::size_t n() const noexcept { return values_a.size(); }
};

enum class WilcoxonMethod {
  Auto,    // exact up to kWilcoxonExactMaxN non-zero differences, normal beyond
  Exact,
  Normal,  // tie- and continuity-corrected normal approximation
};

inline constexpr std::size_t kWilcoxonExactMaxN = 25;

struct WilcoxonResult {
  double statistic = 0.0;  // min(W+, W-)
  double p_value = 1.0;    // two-sided
  std::size_t n_used = 0;  // after dropping zero differences
  bool exact = true;
};

/// Wilcoxon signed-rank test on a - b. Zero differences are dropped,
/// tied magnitudes get midranks.
WilcoxonResult wilcoxon_signed_rank(const PairedSample& s, WilcoxonMethod method = WilcoxonMethod::Auto);

enum class EffectLabel { Small, Medium, Large };
std::string_view to_string(EffectLabel label) noexcept;

/// |delta| < 0.33 small, < 0.474 medium, otherwise large.
EffectLabel effect_label(double delta) noexcept;

struct CliffsDelta {
  double delta = 0.0;
  EffectLabel label = EffectLabel::Small;
};

/// (#{a_i > b_j} - #{a_i < b_j}) / (n_a n_b) over all cross pairs.
CliffsDelta cliffs_delta(std::span<const double> a, std::span<const double> b);
CliffsDelta cliffs_delta(const PairedSample& s);

struct ShapiroWilkResult {
  double w = 1.0;
  double p_value = 1.0;
};

/// Shapiro-Wilk W with Royston's coefficient and p-value approximations
/// (algorithm AS R94), valid for 3 <= n <= 5000.
ShapiroWilkResult shapiro_wilk(std::span<const double> values);

enum class MetricName { Dtw, Mcc, Kld, Ie };
std::string_view to_string(MetricName metric) noexcept;  // "DTW", "MCC", ...
std::optional<MetricName> parse_metric(std::string_view text) noexcept;
double metric_value(const MetricRecord& rec, MetricName metric) noexcept;
/// +1 when higher is better, -1 when lower is better, 0 when undirected (IE).
int better_direction(MetricName metric) noexcept;

enum class Winner { Frontal, Lateral, Tie, NotApplicable };
std::string_view to_string(Winner winner) noexcept;  // "frontal", "lateral", "tie", ""

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
};

struct StatResult {
  FeatureName feature = FeatureName::StepLength;
  SideLabel side = SideLabel::Left;
  MetricName metric = MetricName::Dtw;
  std::size_t n_pairs = 0;
  MeanSd frontal;
  MeanSd lateral;
  double p_value = 1.0;
  // Oriented so that a positive value favours the frontal view (for IE:
  // frontal higher).
  double cliffs_delta = 0.0;
  EffectLabel effect_label = EffectLabel::Small;
  Winner winner = Winner::Tie;
  // Normality annotations; absent when the sample is too small or constant.
  std::optional<double> shapiro_p_frontal;
  std::optional<double> shapiro_p_lateral;
};

/// Pairs frontal and lateral records by trial and compares them.
StatResult compare_views(std::span<const MetricRecord> records, FeatureName feature, SideLabel side,
                         MetricName metric, double alpha = 0.05);

}  // namespace gaitview
