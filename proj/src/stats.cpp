#include "gaitview/stats.hpp"

#include "gaitview/error.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

namespace gaitview {

namespace {

// Ranks of |d| doubled so that midranks stay integral.
std::vector<long> doubled_midranks(const std::vector<double>& magnitudes) {
  const std::size_t n = magnitudes.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return magnitudes[i] < magnitudes[j]; });
  std::vector<long> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && magnitudes[order[j + 1]] == magnitudes[order[i]]) ++j;
    // ranks i+1 .. j+1 share (i + j + 2) / 2; doubled: i + j + 2
    const long doubled = static_cast<long>(i + j + 2);
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = doubled;
    i = j + 1;
  }
  return ranks;
}

double normal_upper_tail(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

WilcoxonResult wilcoxon_signed_rank(const PairedSample& s, WilcoxonMethod method) {
  if (s.values_a.size() != s.values_b.size()) fail(Errc::LengthMismatch, "paired sample lists differ in length");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < s.values_a.size(); ++i) {
    const double d = s.values_a[i] - s.values_b[i];
    if (d != 0.0) diffs.push_back(d);
  }
  if (diffs.empty()) fail(Errc::AllZeroDifferences, "all paired differences are zero");

  const std::size_t n = diffs.size();
  std::vector<double> mags(n);
  for (std::size_t i = 0; i < n; ++i) mags[i] = std::abs(diffs[i]);
  const auto ranks = doubled_midranks(mags);

  long plus2 = 0;
  long total2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total2 += ranks[i];
    if (diffs[i] > 0.0) plus2 += ranks[i];
  }
  const long stat2 = std::min(plus2, total2 - plus2);

  WilcoxonResult res;
  res.statistic = static_cast<double>(stat2) / 2.0;
  res.n_used = n;
  const bool exact = method == WilcoxonMethod::Exact || (method == WilcoxonMethod::Auto && n <= kWilcoxonExactMaxN);
  res.exact = exact;

  if (exact) {
    if (n > 62) fail(Errc::UnsupportedSampleSize, "exact null distribution limited to 62 pairs");
    // Null distribution of doubled W+ over all 2^n equally likely sign patterns.
    std::vector<double> ways(static_cast<std::size_t>(total2) + 1, 0.0);
    ways[0] = 1.0;
    long reach = 0;
    for (long r : ranks) {
      for (long t = reach; t >= 0; --t)
        if (ways[static_cast<std::size_t>(t)] != 0.0) ways[static_cast<std::size_t>(t + r)] += ways[static_cast<std::size_t>(t)];
      reach += r;
    }
    double hits = 0.0;
    for (long t = 0; t <= total2; ++t)
      if (std::min(t, total2 - t) <= stat2) hits += ways[static_cast<std::size_t>(t)];
    res.p_value = std::min(1.0, hits / std::ldexp(1.0, static_cast<int>(n)));
    return res;
  }

  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
  std::map<long, std::size_t> tie_sizes;
  for (long r : ranks) ++tie_sizes[r];
  for (const auto& [_, t] : tie_sizes) {
    const double tt = static_cast<double>(t);
    var -= (tt * tt * tt - tt) / 48.0;
  }
  if (!(var > 0.0)) {
    res.p_value = 1.0;
    return res;
  }
  const double z = std::max(0.0, std::abs(res.statistic - mean) - 0.5) / std::sqrt(var);
  res.p_value = std::min(1.0, 2.0 * normal_upper_tail(z));
  return res;
}

std::string_view to_string(EffectLabel label) noexcept {
  switch (label) {
    case EffectLabel::Small: return "Small";
    case EffectLabel::Medium: return "Medium";
    case EffectLabel::Large: return "Large";
  }
  return "?";
}

EffectLabel effect_label(double delta) noexcept {
  const double mag = std::abs(delta);
  if (mag < 0.33) return EffectLabel::Small;
  if (mag < 0.474) return EffectLabel::Medium;
  return EffectLabel::Large;
}

CliffsDelta cliffs_delta(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) fail(Errc::EmptySample, "Cliff's delta needs two non-empty samples");
  long balance = 0;
  for (double x : a)
    for (double y : b) balance += (x > y) - (x < y);
  CliffsDelta res;
  res.delta = static_cast<double>(balance) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
  res.label = effect_label(res.delta);
  return res;
}

CliffsDelta cliffs_delta(const PairedSample& s) { return cliffs_delta(s.values_a, s.values_b); }

namespace {

double poly(std::span<const double> c, double x) {
  // c[0] + c[1] x + c[2] x^2 + ...
  double result = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) result = result * x + c[i];
  return result;
}

}  // namespace

ShapiroWilkResult shapiro_wilk(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 3 || n > 5000) fail(Errc::UnsupportedSampleSize, "Shapiro-Wilk needs 3 <= n <= 5000, got " + std::to_string(n));
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  if (!(range > 0.0) || range < 1e-19 * std::max(std::abs(x.front()), std::abs(x.back())))
    fail(Errc::ConstantSample, "all values are equal");

  static const double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
  static const double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
  static const double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
  static const double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static const double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static const double c6[] = {-0.4803, -0.082676, 0.0030302};
  static const double g[] = {-2.273, 0.459};

  const double an = static_cast<double>(n);
  const std::size_t half = n / 2;
  const boost::math::normal_distribution<double> std_normal;

  // Positive coefficients for the lower half, a[0] largest.
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = boost::math::quantile(std_normal, (static_cast<double>(i + 1) - 0.375) / (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, rsn) - m[0] / ssumm2;
    std::size_t first_scaled = 1;
    double fac = 0.0;
    if (n > 5) {
      first_scaled = 2;
      const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  }

  // W as the squared correlation between the sorted data and the
  // antisymmetric coefficient vector; 1 - W is formed directly for accuracy.
  std::vector<double> coef(n, 0.0);
  for (std::size_t i = 0; i < half; ++i) {
    coef[i] = -a[i];
    coef[n - 1 - i] = a[i];
  }
  double sa = 0.0, sx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sa += coef[i];
    sx += x[i] / range;
  }
  sa /= an;
  sx /= an;
  double ssa = 0.0, ssx = 0.0, sax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double asa = coef[i] - sa;
    const double xsx = x[i] / range - sx;
    ssa += asa * asa;
    ssx += xsx * xsx;
    sax += asa * xsx;
  }
  const double ssassx = std::sqrt(ssa * ssx);
  const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);

  ShapiroWilkResult res;
  res.w = 1.0 - w1;

  if (n == 3) {
    constexpr double pi6 = 1.90985931710274;   // 6 / pi
    constexpr double stqr = 1.04719755119660;  // pi / 3
    res.p_value = std::max(0.0, pi6 * (std::asin(std::sqrt(res.w)) - stqr));
    return res;
  }

  double y = std::log(w1);
  const double xx = std::log(an);
  double mean = 0.0, sd = 1.0;
  if (n <= 11) {
    const double gamma = poly(g, an);
    if (y >= gamma) {
      res.p_value = 1e-99;
      return res;
    }
    y = -std::log(gamma - y);
    mean = poly(c3, an);
    sd = std::exp(poly(c4, an));
  } else {
    mean = poly(c5, xx);
    sd = std::exp(poly(c6, xx));
  }
  res.p_value = normal_upper_tail((y - mean) / sd);
  return res;
}

std::string_view to_string(MetricName metric) noexcept {
  switch (metric) {
    case MetricName::Dtw: return "DTW";
    case MetricName::Mcc: return "MCC";
    case MetricName::Kld: return "KLD";
    case MetricName::Ie: return "IE";
  }
  return "?";
}

std::optional<MetricName> parse_metric(std::string_view text) noexcept {
  for (auto m : {MetricName::Dtw, MetricName::Mcc, MetricName::Kld, MetricName::Ie}) {
    const auto name = to_string(m);
    if (text.size() != name.size()) continue;
    bool same = true;
    for (std::size_t i = 0; i < name.size(); ++i)
      same = same && std::toupper(static_cast<unsigned char>(text[i])) == name[i];
    if (same) return m;
  }
  return std::nullopt;
}

double metric_value(const MetricRecord& rec, MetricName metric) noexcept {
  switch (metric) {
    case MetricName::Dtw: return rec.dtw;
    case MetricName::Mcc: return rec.mcc;
    case MetricName::Kld: return rec.kld;
    case MetricName::Ie: return rec.ie_2d;
  }
  return 0.0;
}

int better_direction(MetricName metric) noexcept {
  switch (metric) {
    case MetricName::Dtw: return -1;
    case MetricName::Mcc: return 1;
    case MetricName::Kld: return -1;
    case MetricName::Ie: return 0;
  }
  return 0;
}

std::string_view to_string(Winner winner) noexcept {
  switch (winner) {
    case Winner::Frontal: return "frontal";
    case Winner::Lateral: return "lateral";
    case Winner::Tie: return "tie";
    case Winner::NotApplicable: return "";
  }
  return "";
}

namespace {

std::optional<double> normality_p(const std::vector<double>& v) {
  try {
    return shapiro_wilk(v).p_value;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

StatResult compare_views(std::span<const MetricRecord> records, FeatureName feature, SideLabel side,
                         MetricName metric, double alpha) {
  std::map<TrialId, double> frontal, lateral;
  for (const auto& rec : records) {
    if (rec.feature != feature || rec.side != side) continue;
    if (rec.view == ViewLabel::Frontal) frontal[rec.trial] = metric_value(rec, metric);
    else if (rec.view == ViewLabel::Lateral) lateral[rec.trial] = metric_value(rec, metric);
  }
  for (const auto& [trial, _] : frontal)
    if (!lateral.contains(trial))
      fail(Errc::UnpairedSubject, "subject " + std::to_string(trial.subject_index) + " has no lateral " +
                                      feature_key(feature, side) + " record");
  for (const auto& [trial, _] : lateral)
    if (!frontal.contains(trial))
      fail(Errc::UnpairedSubject, "subject " + std::to_string(trial.subject_index) + " has no frontal " +
                                      feature_key(feature, side) + " record");
  if (frontal.empty()) fail(Errc::EmptySample, "no records for " + feature_key(feature, side));

  PairedSample pairs;
  for (const auto& [trial, value] : frontal) {
    pairs.values_a.push_back(value);
    pairs.values_b.push_back(lateral.at(trial));
  }

  StatResult res;
  res.feature = feature;
  res.side = side;
  res.metric = metric;
  res.n_pairs = pairs.n();
  res.frontal = {mean(pairs.values_a), sample_sd(pairs.values_a)};
  res.lateral = {mean(pairs.values_b), sample_sd(pairs.values_b)};
  try {
    res.p_value = wilcoxon_signed_rank(pairs).p_value;
  } catch (const Error& e) {
    if (e.code() != Errc::AllZeroDifferences) throw;
    res.p_value = 1.0;
  }

  const int direction = better_direction(metric);
  const auto delta = direction < 0 ? cliffs_delta(pairs.values_b, pairs.values_a) : cliffs_delta(pairs);
  res.cliffs_delta = delta.delta;
  res.effect_label = delta.label;

  if (direction == 0) {
    res.winner = Winner::NotApplicable;
  } else if (res.p_value < alpha && res.frontal.mean != res.lateral.mean) {
    const bool frontal_higher = res.frontal.mean > res.lateral.mean;
    res.winner = (frontal_higher == (direction > 0)) ? Winner::Frontal : Winner::Lateral;
  } else {
    res.winner = Winner::Tie;
  }
  res.shapiro_p_frontal = normality_p(pairs.values_a);
  res.shapiro_p_lateral = normality_p(pairs.values_b);
  return res;
}

}  // namespace gaitview
