#include "gaitview/metrics.hpp"

#include "gaitview/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gaitview {

void MetricConfig::validate() const {
  if (histogram_bins < 2) fail(Errc::InvalidArgument, "histogram_bins must be >= 2");
  if (!(log_base > 1.0)) fail(Errc::InvalidArgument, "log_base must be > 1");
  if (!(smoothing_epsilon > 0.0)) fail(Errc::InvalidArgument, "smoothing_epsilon must be > 0");
}

namespace {

TimeSeries prepared(const TimeSeries& ts, const MetricConfig& cfg) {
  return cfg.normalize ? znormalize(ts) : ts;
}

}  // namespace

double dtw_distance(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) fail(Errc::DegenerateSignal, "DTW needs non-empty sequences");
  const std::size_t m = y.size();
  // Two rolling rows of the cumulative cost table.
  std::vector<double> prev(m), curr(m);
  prev[0] = std::abs(x[0] - y[0]);
  for (std::size_t j = 1; j < m; ++j) prev[j] = prev[j - 1] + std::abs(x[0] - y[j]);
  for (std::size_t i = 1; i < x.size(); ++i) {
    curr[0] = prev[0] + std::abs(x[i] - y[0]);
    for (std::size_t j = 1; j < m; ++j)
      curr[j] = std::abs(x[i] - y[j]) + std::min({prev[j], curr[j - 1], prev[j - 1]});
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

double dtw_distance(const TimeSeries& x, const TimeSeries& y, const MetricConfig& cfg) {
  if (x.empty() || y.empty()) fail(Errc::DegenerateSignal, "DTW needs non-empty sequences");
  return dtw_distance(prepared(x, cfg).samples(), prepared(y, cfg).samples());
}

CrossCorrelation max_cross_correlation(const TimeSeries& x, const TimeSeries& y, const MetricConfig& cfg) {
  if (x.size() != y.size())
    fail(Errc::LengthMismatch, "cross-correlation needs equal lengths (" + std::to_string(x.size()) + " vs " +
                                   std::to_string(y.size()) + ")");
  if (x.size() < 2) fail(Errc::DegenerateSignal, "cross-correlation needs at least 2 samples");
  const TimeSeries px = prepared(x, cfg);
  const TimeSeries py = prepared(y, cfg);
  const auto a = px.samples();
  const auto b = py.samples();
  const long n = static_cast<long>(a.size());

  auto r = [&](long tau) {
    double sum = 0.0;
    if (tau >= 0) {
      for (long t = 0; t + tau < n; ++t) sum += a[static_cast<std::size_t>(t)] * b[static_cast<std::size_t>(t + tau)];
    } else {
      for (long t = 0; t - tau < n; ++t) sum += a[static_cast<std::size_t>(t - tau)] * b[static_cast<std::size_t>(t)];
    }
    return sum;
  };

  // Visiting 0, -1, +1, -2, +2, ... and keeping only strict improvements
  // realizes the tie-breaking order.
  CrossCorrelation best{r(0), 0};
  for (long k = 1; k < n; ++k) {
    for (long tau : {-k, k}) {
      const double v = r(tau);
      if (v > best.value) best = {v, tau};
    }
  }

  if (cfg.correlation == CorrelationMode::Pearson) {
    const double denom = static_cast<double>(n) * std::sqrt(population_variance(a) * population_variance(b));
    if (denom > 0.0) best.value /= denom;
  }
  return best;
}

std::vector<std::size_t> histogram(std::span<const double> values, double lo, double hi, std::size_t bins) {
  std::vector<std::size_t> counts(bins, 0);
  const double width = hi - lo;
  for (double v : values) {
    std::size_t idx = 0;
    if (width > 0.0) {
      const double pos = (v - lo) / width * static_cast<double>(bins);
      idx = pos <= 0.0 ? 0 : std::min(bins - 1, static_cast<std::size_t>(pos));
    }
    ++counts[idx];
  }
  return counts;
}

double kl_divergence(const TimeSeries& reference, const TimeSeries& candidate, const MetricConfig& cfg) {
  cfg.validate();
  if (reference.empty() || candidate.empty()) fail(Errc::DegenerateSignal, "KLD needs non-empty signals");
  const TimeSeries p_sig = prepared(reference, cfg);
  const TimeSeries q_sig = prepared(candidate, cfg);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (auto s : {p_sig.samples(), q_sig.samples()})
    for (double v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  if (!(hi > lo)) fail(Errc::ConstantSignal, "pooled range of both signals has zero width");

  const auto pc = histogram(p_sig.samples(), lo, hi, cfg.histogram_bins);
  const auto qc = histogram(q_sig.samples(), lo, hi, cfg.histogram_bins);
  const double eps = cfg.smoothing_epsilon;
  const double bins = static_cast<double>(cfg.histogram_bins);
  const double p_total = 1.0 + eps * bins;
  const double q_total = 1.0 + eps * bins;
  const double np = static_cast<double>(p_sig.size());
  const double nq = static_cast<double>(q_sig.size());

  double sum = 0.0;
  for (std::size_t i = 0; i < cfg.histogram_bins; ++i) {
    const double p = (static_cast<double>(pc[i]) / np + eps) / p_total;
    const double q = (static_cast<double>(qc[i]) / nq + eps) / q_total;
    sum += p * std::log(p / q);
  }
  // Gibbs' inequality; clamp the last-ulp negatives from rounding.
  return std::max(0.0, sum / std::log(cfg.log_base));
}

double information_entropy(const TimeSeries& x, const MetricConfig& cfg) {
  cfg.validate();
  if (x.empty()) fail(Errc::DegenerateSignal, "entropy needs a non-empty signal");
  const auto [lo_it, hi_it] = std::minmax_element(x.samples().begin(), x.samples().end());
  const auto counts = histogram(x.samples(), *lo_it, *hi_it, cfg.histogram_bins);
  const double n = static_cast<double>(x.size());
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return std::max(0.0, h / std::log(cfg.log_base));
}

MetricRecord compute_record(const TrialId& trial, FeatureName feature, SideLabel side, ViewLabel view,
                            const TimeSeries& signal_3d, const TimeSeries& signal_2d, const MetricConfig& cfg) {
  MetricRecord rec;
  rec.trial = trial;
  rec.feature = feature;
  rec.side = side;
  rec.view = view;
  try {
    cfg.validate();
    const TimeSeries aligned = signal_2d.size() == signal_3d.size() ? signal_2d
                                                                     : resample_linear(signal_2d, signal_3d.size());
    const TimeSeries ref = prepared(signal_3d, cfg);
    const TimeSeries cand = prepared(aligned, cfg);
    MetricConfig raw = cfg;
    raw.normalize = false;
    rec.dtw = dtw_distance(ref, cand, raw);
    const auto cc = max_cross_correlation(ref, cand, raw);
    rec.mcc = cc.value;
    rec.mcc_lag = cc.lag;
    rec.kld = kl_divergence(ref, cand, raw);
    rec.ie_2d = information_entropy(cand, raw);
    rec.ie_3d = information_entropy(ref, raw);
  } catch (const Error& e) {
    throw e.with_context({.stage = "metrics",
                          .trial = trial.str(),
                          .feature = std::string(to_string(feature)),
                          .side = std::string(to_string(side)),
                          .view = std::string(to_string(view))});
  }
  return rec;
}

}  // namespace gaitview
