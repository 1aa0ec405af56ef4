// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "gaitview/filter.hpp"
#include "gaitview/metrics.hpp"
#include "gaitview/pca.hpp"
#include "gaitview/pipeline.hpp"
#include "gaitview/stats.hpp"
#include "gaitview/synth.hpp"

#include "oracles/oracles.hpp"

#include "json.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

using namespace gaitview;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  if (!out.ok) ++failures;
  std::printf("%s [%d] %s%s%s\n", out.ok ? "PASS" : "FAIL", id, name, out.detail.empty() ? "" : ": ",
              out.detail.c_str());
  std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

std::vector<double> sinusoid(double f, double fs, std::size_t n, double phase = 0.0) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = std::sin(2.0 * std::numbers::pi * f * i / fs + phase);
  return v;
}

TimeSeries ts(std::vector<double> v) { return TimeSeries(std::move(v), 100.0); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> tree(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = slurp(e.path());
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gaitview_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

int main() {
  const MetricConfig raw{.normalize = false};

  criterion(1, "DTW equals brute-force path enumeration on 500 pairs", [&] {
    Outcome o;
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<std::size_t> len(1, oracles::kDtwMaxLength);
    const auto t0 = Clock::now();
    for (int rep = 0; rep < 500; ++rep) {
      const auto x = uniform(rng, len(rng), -5.0, 5.0), y = uniform(rng, len(rng), -5.0, 5.0);
      const double got = dtw_distance(x, y), want = oracles::dtw_bruteforce(x, y);
      o.require(got == want, "pair " + std::to_string(rep) + ": " + fmt(got) + " vs " + fmt(want));
    }
    const double secs = seconds_since(t0);
    o.require(secs < 30.0, "took " + fmt(secs) + " s");
    if (o.ok) o.detail = fmt(secs) + " s";
    return o;
  });

  criterion(2, "DTW identity, symmetry and nonnegativity on 1000 pairs", [&] {
    Outcome o;
    std::mt19937_64 rng(1002);
    std::uniform_int_distribution<std::size_t> len(1, 60);
    for (int rep = 0; rep < 1000; ++rep) {
      const auto x = ts(uniform(rng, len(rng), -3.0, 3.0)), y = ts(uniform(rng, len(rng), -3.0, 3.0));
      const double xy = dtw_distance(x, y, raw), yx = dtw_distance(y, x, raw);
      o.require(dtw_distance(x, x, raw) == 0.0, "dtw(x,x) != 0 at pair " + std::to_string(rep));
      o.require(xy == yx, "asymmetric at pair " + std::to_string(rep));
      o.require(xy >= 0.0, "negative at pair " + std::to_string(rep));
    }
    return o;
  });

  criterion(3, "MCC recovers delays 1..20 exactly", [&] {
    Outcome o;
    const std::size_t n = 1000;
    const auto base = sinusoid(1.0, 100.0, n + 20);
    for (long k = 1; k <= 20; ++k) {
      std::vector<double> x(base.begin() + 20, base.begin() + 20 + n);
      std::vector<double> y(base.begin() + 20 - k, base.begin() + 20 - k + n);  // y_t = x_{t-k}
      const auto cc = max_cross_correlation(ts(x), ts(y));
      o.require(cc.lag == k, "delay " + std::to_string(k) + " recovered as " + std::to_string(cc.lag));
    }
    return o;
  });

  criterion(4, "KLD identity, nonnegativity and two-bin closed form", [&] {
    Outcome o;
    std::mt19937_64 rng(1004);
    for (int rep = 0; rep < 1000; ++rep) {
      const auto x = ts(uniform(rng, 50, -2.0, 2.0));
      const auto y = ts(uniform(rng, 40, -1.0, 3.0));
      o.require(kl_divergence(x, x) < 1e-9, "KLD(x,x) at pair " + std::to_string(rep));
      o.require(kl_divergence(x, y) >= 0.0, "negative z-normalized KLD at pair " + std::to_string(rep));
      o.require(kl_divergence(x, y, raw) >= 0.0, "negative raw KLD at pair " + std::to_string(rep));
    }
    const MetricConfig two{.normalize = false, .histogram_bins = 2};
    const double d = kl_divergence(ts({0, 0, 0, 0}), ts({0, 0, 1, 1}), two);
    const double e = two.smoothing_epsilon, z = 1.0 + 2.0 * e;
    const double p1 = (1.0 + e) / z, p2 = e / z, q = (0.5 + e) / z;
    const double closed = p1 * std::log2(p1 / q) + p2 * std::log2(p2 / q);
    o.require(std::fabs(d - closed) < 1e-6, "two-bin " + fmt(d) + " vs closed form " + fmt(closed));
    o.require(std::fabs(d - 1.0) < 1e-6, "two-bin " + fmt(d) + " vs 1 bit");
    return o;
  });

  criterion(5, "IE calibration and permutation invariance", [&] {
    Outcome o;
    std::vector<double> fill(256);
    std::iota(fill.begin(), fill.end(), 0.0);
    const MetricConfig bins256{.normalize = false};
    const double h = information_entropy(ts(fill), bins256);
    o.require(std::fabs(h - 8.0) < 1e-9, "uniform fill gives " + fmt(h));
    o.require(information_entropy(ts(std::vector<double>(50, 3.0)), bins256) == 0.0, "constant signal nonzero");
    std::mt19937_64 rng(1005);
    auto x = uniform(rng, 300, -4.0, 4.0);
    const double ref = information_entropy(ts(x));
    for (int rep = 0; rep < 100; ++rep) {
      std::shuffle(x.begin(), x.end(), rng);
      o.require(information_entropy(ts(x)) == ref, "shuffle " + std::to_string(rep) + " changed IE");
    }
    return o;
  });

  criterion(6, "zero-phase filtering at 2 Hz and attenuation at 30 Hz", [&] {
    Outcome o;
    const FilterSpec spec;  // 7 Hz, 100 Hz, order 4
    const auto x = sinusoid(2.0, 100.0, 400);
    const auto y = filtfilt(x, spec);
    // Peak of the cross-correlation over lags -25..25 on the interior.
    long best_lag = 0;
    double best = -1e300;
    for (long lag = -25; lag <= 25; ++lag) {
      double s = 0.0;
      for (long i = 50; i < 350; ++i) s += x[i] * y[i + lag];
      if (s > best) best = s, best_lag = lag;
    }
    auto rms = [](const std::vector<double>& v) {
      double s = 0.0;
      for (std::size_t i = 50; i < 350; ++i) s += v[i] * v[i];
      return std::sqrt(s / 300.0);
    };
    const double ratio = rms(y) / rms(x);
    const auto x30 = sinusoid(30.0, 100.0, 400);
    const double ratio30 = rms(filtfilt(x30, spec)) / rms(x30);
    o.require(best_lag == 0, "2 Hz peak lag " + std::to_string(best_lag));
    o.require(ratio >= 0.98, "2 Hz amplitude ratio " + fmt(ratio));
    o.require(ratio30 <= 0.05, "30 Hz amplitude ratio " + fmt(ratio30));
    if (o.ok) o.detail = "lag 0, ratio " + fmt(ratio) + ", 30 Hz ratio " + fmt(ratio30);
    return o;
  });

  criterion(7, "Wilcoxon exact matches enumeration; n=5 gives 0.0625; exact vs normal at n=18", [&] {
    Outcome o;
    std::mt19937_64 rng(1007);
    std::uniform_int_distribution<int> len(1, 12), small(-6, 6);
    for (int rep = 0; rep < 50;) {
      PairedSample s;
      std::vector<double> d;
      const int n = len(rng);
      for (int i = 0; i < n; ++i) {
        const double a = small(rng), b = small(rng);
        s.values_a.push_back(a);
        s.values_b.push_back(b);
        if (a != b) d.push_back(a - b);
      }
      if (d.empty()) continue;  // all-zero samples have no p-value
      const double got = wilcoxon_signed_rank(s, WilcoxonMethod::Exact).p_value;
      const double want = oracles::wilcoxon_enumerate(d);
      o.require(got == want, "sample " + std::to_string(rep) + ": " + fmt(got) + " vs " + fmt(want));
      ++rep;
    }
    const PairedSample five{{1, 2, 3, 4, 5}, {0, 0, 0, 0, 0}};
    const double p5 = wilcoxon_signed_rank(five, WilcoxonMethod::Exact).p_value;
    o.require(p5 == 0.0625, "n=5 all positive gives " + fmt(p5));
    double worst = 0.0;
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
      PairedSample s;
      for (int i = 0; i < 18; ++i) {
        s.values_a.push_back(noise(rng) + 0.3);
        s.values_b.push_back(noise(rng));
      }
      const double pe = wilcoxon_signed_rank(s, WilcoxonMethod::Exact).p_value;
      const double pn = wilcoxon_signed_rank(s, WilcoxonMethod::Normal).p_value;
      worst = std::max(worst, std::fabs(pe - pn));
    }
    o.require(worst <= 0.02, "max |exact - normal| at n=18 is " + fmt(worst));
    if (o.ok) o.detail = "max |exact - normal| = " + fmt(worst);
    return o;
  });

  criterion(8, "Cliff's delta labels, antisymmetry and monotone invariance", [&] {
    Outcome o;
    o.require(effect_label(0.3299) == EffectLabel::Small, "0.3299 not small");
    o.require(effect_label(0.33) == EffectLabel::Medium, "0.33 not medium");
    o.require(effect_label(0.4739) == EffectLabel::Medium, "0.4739 not medium");
    o.require(effect_label(0.474) == EffectLabel::Large, "0.474 not large");
    o.require(effect_label(-0.33) == EffectLabel::Medium, "-0.33 not medium");
    o.require(effect_label(-0.474) == EffectLabel::Large, "-0.474 not large");
    std::mt19937_64 rng(1008);
    std::uniform_int_distribution<std::size_t> len(1, 30);
    for (int rep = 0; rep < 200; ++rep) {
      auto a = uniform(rng, len(rng), -2.0, 2.0), b = uniform(rng, len(rng), -1.5, 2.5);
      const double ab = cliffs_delta(a, b).delta, ba = cliffs_delta(b, a).delta;
      o.require(ab == -ba, "antisymmetry at sample " + std::to_string(rep));
      auto transform = [](std::vector<double> v) {
        for (double& x : v) x = std::exp(3.0 * x) + 7.0;
        return v;
      };
      o.require(cliffs_delta(transform(a), transform(b)).delta == ab, "monotone invariance at sample " +
                                                                             std::to_string(rep));
    }
    return o;
  });

  criterion(9, "PCA rank recovery, ratio sum and round-trip", [&] {
    Outcome o;
    std::mt19937_64 rng(1009);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int k = 1; k <= 4; ++k) {
      Eigen::MatrixXd latent(120, k), mix(k, 7);
      for (Eigen::Index i = 0; i < latent.size(); ++i) latent.data()[i] = g(rng);
      for (Eigen::Index i = 0; i < mix.size(); ++i) mix.data()[i] = g(rng);
      FeatureMatrix m{latent * mix, {}};
      m.values.rowwise() += Eigen::RowVectorXd::LinSpaced(7, -3.0, 3.0);
      const auto fit = pca_fit(m, 0.999999);
      o.require(fit.k == static_cast<std::size_t>(k), "rank " + std::to_string(k) + " gave k=" + std::to_string(fit.k));
      o.require(std::fabs(fit.explained_ratio - 1.0) < 1e-9, "rank " + std::to_string(k) + " ratio " +
                                                                 fmt(fit.explained_ratio));
      o.require(std::fabs(fit.variance_ratios.sum() - 1.0) < 1e-9, "ratio sum " + fmt(fit.variance_ratios.sum()));
    }
    FeatureMatrix full{Eigen::MatrixXd(80, 6), {}};
    for (Eigen::Index i = 0; i < full.values.size(); ++i) full.values.data()[i] = g(rng) * (1 + i % 6);
    const auto fit = pca_fit(full, 1.0);
    o.require(std::fabs(fit.variance_ratios.sum() - 1.0) < 1e-9, "full-rank ratio sum");
    const double err = (pca_reconstruct(pca_project(full, fit), fit) - full.values).cwiseAbs().maxCoeff();
    o.require(err < 1e-6, "round-trip error " + fmt(err));
    return o;
  });

  const fs::path root = scratch("run");

  criterion(10, "lateral wins step-length DTW, frontal wins trunk KLD (18 synthetic subjects)", [&] {
    Outcome o;
    const auto t0 = Clock::now();
    DatasetOptions opts;  // 18 subjects, default presets, 2 px noise, seed 1
    make_paired_dataset(opts, root / "data");
    RunConfig cfg;
    cfg.manifest = root / "data" / std::string(kManifestFile);
    cfg.out_dir = root / "out";
    const auto result = analyze(cfg);
    const double secs = seconds_since(t0);

    auto collect = [&](FeatureName f, MetricName m, ViewLabel v, std::optional<SideLabel> side) {
      std::vector<double> out;
      for (const auto& r : result.records)
        if (r.feature == f && r.view == v && (!side || r.side == *side)) out.push_back(metric_value(r, m));
      return out;
    };
    std::string detail;
    for (SideLabel side : {SideLabel::Left, SideLabel::Right}) {
      const double f = median(collect(FeatureName::StepLength, MetricName::Dtw, ViewLabel::Frontal, side));
      const double l = median(collect(FeatureName::StepLength, MetricName::Dtw, ViewLabel::Lateral, side));
      o.require(l < f, std::string("step_length ") + std::string(to_string(side)) + " DTW median lateral " + fmt(l) +
                           " vs frontal " + fmt(f));
      detail += std::string("step DTW(") + std::string(to_string(side)) + ") L " + fmt(l) + " < F " + fmt(f) + "; ";
    }
    const double kf = median(collect(FeatureName::TrunkRotation, MetricName::Kld, ViewLabel::Frontal, std::nullopt));
    const double kl = median(collect(FeatureName::TrunkRotation, MetricName::Kld, ViewLabel::Lateral, std::nullopt));
    o.require(kf < kl, "trunk KLD median frontal " + fmt(kf) + " vs lateral " + fmt(kl));
    o.require(secs < 120.0, "pipeline took " + fmt(secs) + " s");
    if (o.ok) o.detail = detail + "trunk KLD F " + fmt(kf) + " < L " + fmt(kl) + "; " + fmt(secs) + " s";
    return o;
  });

  criterion(11, "synth + analyze twice gives byte-identical outputs", [&] {
    Outcome o;
    for (const char* run : {"a", "b"}) {
      DatasetOptions opts;
      opts.subjects = 6;
      opts.seed = 11;
      make_paired_dataset(opts, root / run / "data");
      RunConfig cfg;
      cfg.manifest = root / run / "data" / std::string(kManifestFile);
      cfg.out_dir = root / run / "out";
      cfg.export_pca = true;
      run_analyze(cfg);
      run_recommend(cfg.out_dir);
    }
    const auto a = tree(root / "a"), b = tree(root / "b");
    o.require(a.size() == b.size(), "file counts differ");
    for (const auto& [name, content] : a) {
      const auto it = b.find(name);
      o.require(it != b.end(), name + " missing from second run");
      if (it != b.end()) o.require(it->second == content, name + " differs");
    }
    if (o.ok) o.detail = std::to_string(a.size()) + " files compared";
    return o;
  });

  criterion(12, "stats CSV headers and radar value ranges", [&] {
    Outcome o;
    const fs::path out = root / "a" / "out";
    std::size_t files = 0;
    for (FeatureName f : {FeatureName::StepLength, FeatureName::KneeRotation, FeatureName::TrunkRotation,
                          FeatureName::WristToHipMid}) {
      std::istringstream in(slurp(out / stats_file_name(f)));
      std::string header;
      std::getline(in, header);
      o.require(header == kStatsHeader, stats_file_name(f) + " header '" + header + "'");
      for (std::string line; std::getline(in, line);)
        o.require(std::count(line.begin(), line.end(), ',') == 8, stats_file_name(f) + " row has wrong arity");
      ++files;
    }
    const auto radar = nlohmann::json::parse(slurp(out / std::string(kRadarFile)));
    std::size_t pairs = 0;
    for (const auto& [key, entry] : radar.items())
      for (const auto& [metric, fv] : entry.at("frontal").items()) {
        const double f = fv.get<double>(), l = entry.at("lateral").at(metric).get<double>();
        o.require(f >= 0.0 && f <= 1.0 && l >= 0.0 && l <= 1.0, key + " " + metric + " outside [0,1]");
        o.require(std::max(f, l) == 1.0, key + " " + metric + " has no 1");
        o.require(std::min(f, l) == 0.0 || f == l, key + " " + metric + " has no 0");
        ++pairs;
      }
    o.require(pairs == 28, "expected 28 radar pairs, got " + std::to_string(pairs));
    if (o.ok) o.detail = std::to_string(files) + " stats files, " + std::to_string(pairs) + " radar pairs";
    return o;
  });

  fs::remove_all(root);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
