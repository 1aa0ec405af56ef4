#include "gaitview/filter.hpp"

#include "gaitview/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace gaitview {

void FilterSpec::validate() const {
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
    fail(Errc::InvalidFilterSpec, "sample rate must be positive");
  if (!(cutoff_hz > 0.0)) fail(Errc::InvalidFilterSpec, "cutoff must be positive");
  if (cutoff_hz >= sample_rate_hz / 2.0)
    fail(Errc::InvalidFilterSpec, "cutoff " + format_double(cutoff_hz) + " Hz is not below Nyquist (" +
                                      format_double(sample_rate_hz / 2.0) + " Hz)");
  if (order < 2 || order % 2 != 0) fail(Errc::InvalidFilterSpec, "order must be even and >= 2");
}

FilterCoefficients butterworth_coeffs(const FilterSpec& spec) {
  spec.validate();
  const int n = spec.design_order();
  const double warped = std::tan(std::numbers::pi * spec.cutoff_hz / spec.sample_rate_hz);

  // Denominator: product of (1 - z_k z^-1) over the bilinear images of the
  // analog prototype poles.
  std::vector<std::complex<double>> poly{1.0};
  for (int k = 0; k < n; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + n + 1) / (2.0 * n);
    const std::complex<double> analog = std::polar(1.0, theta) * warped;
    const std::complex<double> digital = (1.0 + analog) / (1.0 - analog);
    std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] -= digital * poly[i];
    }
    poly = std::move(next);
  }

  FilterCoefficients c;
  c.a.resize(poly.size());
  for (std::size_t i = 0; i < poly.size(); ++i) c.a[i] = poly[i].real();

  // Numerator: N zeros at z = -1, i.e. binomial coefficients.
  c.b.assign(static_cast<std::size_t>(n) + 1, 0.0);
  c.b[0] = 1.0;
  for (int k = 0; k < n; ++k)
    for (std::size_t i = static_cast<std::size_t>(k) + 1; i > 0; --i) c.b[i] += c.b[i - 1];

  double sum_a = 0.0, sum_b = 0.0;
  for (double v : c.a) sum_a += v;
  for (double v : c.b) sum_b += v;
  const double gain = sum_a / sum_b;
  for (double& v : c.b) v *= gain;
  return c;
}

std::vector<double> lfilter(const FilterCoefficients& c, std::span<const double> x,
                            std::span<const double> initial_state) {
  const std::size_t order = std::max(c.a.size(), c.b.size()) - 1;
  std::vector<double> b(order + 1, 0.0), a(order + 1, 0.0);
  std::copy(c.b.begin(), c.b.end(), b.begin());
  std::copy(c.a.begin(), c.a.end(), a.begin());
  const double a0 = a[0];
  for (auto& v : b) v /= a0;
  for (auto& v : a) v /= a0;

  std::vector<double> z(order, 0.0);
  if (!initial_state.empty()) std::copy_n(initial_state.begin(), std::min(order, initial_state.size()), z.begin());

  std::vector<double> y(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double out = b[0] * x[t] + (order > 0 ? z[0] : 0.0);
    for (std::size_t i = 0; i + 1 < order; ++i) z[i] = b[i + 1] * x[t] - a[i + 1] * out + z[i + 1];
    if (order > 0) z[order - 1] = b[order] * x[t] - a[order] * out;
    y[t] = out;
  }
  return y;
}

namespace {

std::vector<double> reversed(std::span<const double> x) { return {x.rbegin(), x.rend()}; }

// Forward-backward filtering with initial conditions chosen by least squares
// so that the forward-backward and backward-forward results agree.
std::vector<double> filtfilt_matched_states(const FilterCoefficients& c, std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t order = std::max(c.a.size(), c.b.size()) - 1;

  // Zero-input response to each unit initial state, and the same response
  // reversed and filtered again.
  Eigen::MatrixXd obs(n, order), twice(n, order);
  const std::vector<double> zeros(n, 0.0);
  for (std::size_t k = 0; k < order; ++k) {
    std::vector<double> unit(order, 0.0);
    unit[k] = 1.0;
    const auto response = lfilter(c, zeros, unit);
    const auto again = lfilter(c, reversed(response));
    for (std::size_t t = 0; t < n; ++t) {
      obs(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = response[t];
      twice(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(k)) = again[t];
    }
  }
  const Eigen::MatrixXd obs_rev = obs.colwise().reverse();
  const Eigen::MatrixXd twice_rev = twice.colwise().reverse();

  const auto y_f = lfilter(c, x);
  auto y_fb = reversed(lfilter(c, reversed(y_f)));
  const auto y_b = reversed(lfilter(c, reversed(x)));
  const auto y_bf = lfilter(c, y_b);

  const auto nn = static_cast<Eigen::Index>(n);
  const auto no = static_cast<Eigen::Index>(order);
  Eigen::MatrixXd system(nn, 2 * no);
  system << twice_rev - obs, obs_rev - twice;
  Eigen::VectorXd delta(nn);
  for (Eigen::Index t = 0; t < nn; ++t) delta(t) = y_bf[static_cast<std::size_t>(t)] - y_fb[static_cast<std::size_t>(t)];
  const Eigen::VectorXd states = system.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(delta);

  Eigen::MatrixXd response(nn, 2 * no);
  response << twice_rev, obs_rev;
  const Eigen::VectorXd correction = response * states;
  for (std::size_t t = 0; t < n; ++t) y_fb[t] += correction(static_cast<Eigen::Index>(t));
  return y_fb;
}

}  // namespace

std::vector<double> filtfilt(std::span<const double> x, const FilterSpec& spec) {
  const auto coeffs = butterworth_coeffs(spec);
  const std::size_t pad = spec.pad_length();
  const std::size_t n = x.size();
  if (n <= pad)
    fail(Errc::SignalTooShort, "signal of " + std::to_string(n) + " samples needs more than " +
                                   std::to_string(pad) + " for zero-phase filtering");

  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  const auto y = filtfilt_matched_states(coeffs, ext);
  return {y.begin() + static_cast<std::ptrdiff_t>(pad), y.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

TimeSeries filtfilt(const TimeSeries& ts, const FilterSpec& spec) {
  return ts.with_samples(filtfilt(ts.samples(), spec));
}

PoseSequence filter_tracks(const PoseSequence& seq, const FilterSpec& spec) {
  PoseSequence out = seq;
  const std::size_t n = seq.frames.size();
  for (std::size_t k = 0; k < kKeypointCount; ++k) {
    const bool complete = n > 0 && std::all_of(seq.frames.begin(), seq.frames.end(),
                                               [k](const PoseFrame& f) { return f.keypoints[k].has_value(); });
    if (!complete) continue;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = seq.frames[i].keypoints[k]->x;
      ys[i] = seq.frames[i].keypoints[k]->y;
    }
    xs = filtfilt(xs, spec);
    ys = filtfilt(ys, spec);
    for (std::size_t i = 0; i < n; ++i) {
      out.frames[i].keypoints[k]->x = xs[i];
      out.frames[i].keypoints[k]->y = ys[i];
    }
  }
  return out;
}

MarkerSequence filter_tracks(const MarkerSequence& seq, const FilterSpec& spec) {
  MarkerSequence out = seq;
  const std::size_t n = seq.frames.size();
  if (n == 0) return out;
  std::vector<double> track(n);
  for (std::size_t m = 0; m < seq.marker_names.size(); ++m) {
    for (double Point3::*axis : {&Point3::x, &Point3::y, &Point3::z}) {
      for (std::size_t i = 0; i < n; ++i) track[i] = seq.frames[i].positions[m].*axis;
      const auto smooth = filtfilt(track, spec);
      for (std::size_t i = 0; i < n; ++i) out.frames[i].positions[m].*axis = smooth[i];
    }
  }
  return out;
}

}  // namespace gaitview
