#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fivmon/error.hpp"
#include "fivmon/synth.hpp"
#include "fivmon/wear_stage.hpp"
#include "oracles.hpp"

using namespace fivmon;
namespace orc = fivmon::oracle;

namespace {

FrictionTrace exp_trace(double mu0, double mu_inf, double tau, double span = 60.0,
                        double step = 0.1) {
  std::vector<double> t;
  std::vector<double> mu;
  for (int i = 0; i * step <= span + 1e-9; ++i) {
    t.push_back(i * step);
    mu.push_back(mu_inf + (mu0 - mu_inf) * std::exp(-t.back() / tau));
  }
  return FrictionTrace(t, mu);
}

RmsSeries series_from(const std::vector<double>& t_min, const std::vector<double>& y) {
  RmsSeries s;
  for (double t : t_min) s.window_centers.push_back(60.0 * t);
  s.rms_values = y;
  s.window_seconds = 60.0;
  s.records_per_window.assign(y.size(), 10);
  return s;
}

StageSegmentation two_stage(double boundary, double end) {
  StageSegmentation seg;
  seg.boundary_minutes = boundary;
  seg.stages = {{WearStage::kRunningIn, 0.0, boundary}, {WearStage::kStable, boundary, end}};
  seg.method_tag = "test";
  return seg;
}

// Analytic first crossing of |mu'(t)| < thr for the fitted exponential.
double analytic_boundary(const TrendFit& f, double thr) {
  return f.t_origin + f.tau * std::log(std::abs(f.mu0 - f.mu_inf) / (f.tau * thr));
}

}  // namespace

TEST(FrictionTrace, Validation) {
  EXPECT_THROW(FrictionTrace({0.0, 1.0}, {0.1}), InputError);
  EXPECT_THROW(FrictionTrace({}, {}), InputError);
  EXPECT_THROW(FrictionTrace({0.0, 0.0}, {0.1, 0.1}), InputError);
  EXPECT_THROW(FrictionTrace({0.0, 1.0}, {0.1, 0.0}), InputError);
  EXPECT_THROW(FrictionTrace({0.0, 1.0}, {0.1, 2.0}), InputError);
  EXPECT_THROW(FrictionTrace({0.0, 1.0}, {0.1, NAN}), InputError);
}

TEST(FitFrictionTrend, RecoversNoiselessParameters) {
  auto fit = fit_friction_trend(exp_trace(0.129, 0.103, 12.0));
  EXPECT_NEAR(fit.mu0 / 0.129, 1.0, 0.01);
  EXPECT_NEAR(fit.mu_inf / 0.103, 1.0, 0.01);
  EXPECT_NEAR(fit.tau / 12.0, 1.0, 0.01);
  EXPECT_LT(fit.rmse, 1e-6);
  EXPECT_FALSE(fit.no_decay);
}

TEST(FitFrictionTrend, ConstantTraceHasNoDecay) {
  std::vector<double> t;
  for (int i = 0; i < 20; ++i) t.push_back(i);
  auto trace = FrictionTrace(t, std::vector<double>(20, 0.103));
  auto fit = fit_friction_trend(trace);
  EXPECT_TRUE(fit.no_decay);
  EXPECT_DOUBLE_EQ(fit.mu_inf, 0.103);
  EXPECT_DOUBLE_EQ(fit.mu0, 0.103);
  EXPECT_DOUBLE_EQ(fit.tau, 19.0);

  auto seg = segment_stages(fit, trace);
  EXPECT_EQ(seg.boundary_minutes, 0.0);
  ASSERT_EQ(seg.stages.size(), 1u);
  EXPECT_EQ(seg.stages[0].stage, WearStage::kStable);
  EXPECT_EQ(seg.stages[0].end_min, 19.0);
  EXPECT_NE(std::find(seg.flags.begin(), seg.flags.end(), "no_decay"), seg.flags.end());
}

TEST(FitFrictionTrend, MultiplicativeNoiseMonteCarlo) {
  auto clean = exp_trace(0.129, 0.103, 10.0);
  int within = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, 0.02);
    std::vector<double> mu(clean.mu_values());
    for (auto& m : mu) m *= 1.0 + d(rng);
    auto fit = fit_friction_trend(FrictionTrace(clean.times(), mu));
    if (std::abs(fit.mu_inf - 0.103) <= 0.002) ++within;
  }
  EXPECT_EQ(within, 100);
}

TEST(FitFrictionTrend, NeedsEightPoints) {
  EXPECT_THROW(fit_friction_trend(FrictionTrace({0, 1, 2, 3, 4, 5, 6}, std::vector<double>(7, 0.1))),
               InputError);
}

TEST(SegmentStages, ReferenceTraceGivesFortyMinutes) {
  FrictionModel model;
  for (std::uint64_t seed : {1u, 2u, 20220501u}) {
    auto trace = generate_friction_trace(model, 60.0, 0.1, 0.0005, seed);
    auto fit = fit_friction_trend(trace);
    auto seg = segment_stages(fit, trace);
    EXPECT_NEAR(seg.boundary_minutes, 40.0, 2.0);
    EXPECT_NEAR(seg.boundary_minutes, analytic_boundary(fit, kDefaultSlopeThreshold), 1e-9);
    ASSERT_EQ(seg.stages.size(), 2u);
    EXPECT_EQ(seg.stages[0].stage, WearStage::kRunningIn);
    EXPECT_EQ(seg.stages[1].stage, WearStage::kStable);
    EXPECT_EQ(seg.stages[0].start_min, trace.start());
    EXPECT_EQ(seg.stages[0].end_min, seg.stages[1].start_min);
    EXPECT_EQ(seg.stages[1].end_min, trace.end());
    EXPECT_TRUE(seg.flags.empty());
  }
}

TEST(SegmentStages, SlowDecayNeverReachesThreshold) {
  auto trace = exp_trace(0.129, 0.05, 5000.0);
  auto fit = fit_friction_trend(trace);
  // |mu'| stays near 0.079/5000 = 1.6e-5 per minute.
  auto seg = segment_stages(fit, trace, 1e-5);
  ASSERT_EQ(seg.stages.size(), 1u);
  EXPECT_EQ(seg.stages[0].stage, WearStage::kRunningIn);
  EXPECT_EQ(seg.boundary_minutes, trace.end());
  EXPECT_NE(std::find(seg.flags.begin(), seg.flags.end(), "threshold_not_reached"), seg.flags.end());
}

TEST(SegmentStages, MonotoneInThreshold) {
  auto trace = exp_trace(0.129, 0.103, 10.0);
  auto fit = fit_friction_trend(trace);
  double previous = INFINITY;
  for (double thr : {1e-6, 1e-5, 4.75e-5, 1e-4, 1e-3, 1e-2}) {
    const double b = segment_stages(fit, trace, thr).boundary_minutes;
    EXPECT_LE(b, previous);
    previous = b;
  }
}

TEST(SegmentStages, ScalingMuAndThresholdTogether) {
  auto trace = exp_trace(0.129, 0.103, 10.0);
  const double base = segment_stages(fit_friction_trend(trace), trace).boundary_minutes;
  for (double c : {0.5, 3.0, 7.0}) {
    std::vector<double> mu(trace.mu_values());
    for (auto& m : mu) m *= c;
    FrictionTrace scaled(trace.times(), mu);
    const double b =
        segment_stages(fit_friction_trend(scaled), scaled, c * kDefaultSlopeThreshold).boundary_minutes;
    EXPECT_NEAR(b, base, 1e-6);
  }
}

TEST(SegmentStages, RejectsBadThreshold) {
  auto trace = exp_trace(0.129, 0.103, 10.0);
  EXPECT_THROW(segment_stages(fit_friction_trend(trace), trace, 0.0), InputError);
}

TEST(ClassifyRmsTrend, FlatSeriesIsStableEverywhere) {
  std::vector<double> t;
  for (int i = 0; i < 60; ++i) t.push_back(i + 0.5);
  auto report = classify_rms_trend(series_from(t, std::vector<double>(60, 0.14)), two_stage(40.0, 60.0));
  ASSERT_EQ(report.stages.size(), 2u);
  EXPECT_EQ(report.stages[0].label, TrendLabel::kStable);
  EXPECT_EQ(report.stages[1].label, TrendLabel::kStable);
  EXPECT_DOUBLE_EQ(report.stage_mean_ratio, 1.0);
}

TEST(ClassifyRmsTrend, LinearRiseInBothStages) {
  std::vector<double> t;
  std::vector<double> y;
  for (int i = 0; i < 60; ++i) {
    t.push_back(i + 0.5);
    y.push_back(0.05 + 0.002 * t.back());
  }
  auto report = classify_rms_trend(series_from(t, y), two_stage(40.0, 60.0));
  EXPECT_EQ(report.stages[0].label, TrendLabel::kRising);
  EXPECT_EQ(report.stages[1].label, TrendLabel::kRising);
  std::vector<double> t1(t.begin(), t.begin() + 40);
  std::vector<double> y1(y.begin(), y.begin() + 40);
  EXPECT_NEAR(report.stages[0].slope_per_min, orc::ols_slope(t1, y1), 1e-12);
  EXPECT_EQ(report.stages[0].n_points, 40u);
  EXPECT_EQ(report.stages[1].n_points, 20u);
}

TEST(ClassifyRmsTrend, RunningInShape) {
  std::vector<double> t;
  std::vector<double> y;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> d(0.0, 0.002);
  for (int i = 0; i < 60; ++i) {
    t.push_back(i + 0.5);
    y.push_back(0.14 * (1.0 - std::exp(-t.back() / 6.0)) + (t.back() >= 40.0 ? d(rng) : 0.0));
  }
  auto seg = two_stage(40.0, 60.0);
  auto report = classify_rms_trend(series_from(t, y), seg);
  EXPECT_EQ(report.stages[0].label, TrendLabel::kRising);
  EXPECT_EQ(report.stages[1].label, TrendLabel::kStable);
  EXPECT_GT(report.stages[1].mean_rms, report.stages[0].mean_rms);
  EXPECT_GT(report.stage_mean_ratio, 1.0);

  // Labels survive uniform scaling.
  std::vector<double> scaled(y);
  for (auto& v : scaled) v *= 37.0;
  auto r2 = classify_rms_trend(series_from(t, scaled), seg);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(r2.stages[i].label, report.stages[i].label);
}

TEST(ClassifyRmsTrend, TooFewPoints) {
  std::vector<double> t{0.5, 1.5, 2.5, 3.5, 4.5, 5.5};
  std::vector<double> y{1, 2, 3, 4, 5, 6};
  auto report = classify_rms_trend(series_from(t, y), two_stage(4.0, 6.0));
  EXPECT_EQ(report.stages[0].label, TrendLabel::kRising);
  EXPECT_EQ(report.stages[1].label, TrendLabel::kInsufficientData);
  EXPECT_EQ(to_string(TrendLabel::kInsufficientData), "insufficient data");
}

TEST(SegmentFromRms, SettledBoundary) {
  std::vector<double> t;
  std::vector<double> y;
  for (int i = 0; i < 60; ++i) {
    t.push_back(i + 0.5);
    y.push_back(0.14 * (1.0 - std::exp(-t.back() / 8.0)));
  }
  auto seg = segment_stages_from_rms(series_from(t, y));
  // 95% settled at tau * ln(20) after the first point.
  EXPECT_NEAR(seg.boundary_minutes, 0.5 + 8.0 * std::log(20.0), 0.05);
  EXPECT_NE(std::find(seg.flags.begin(), seg.flags.end(), "rms_only_segmentation"), seg.flags.end());
}

TEST(WearStage, Labels) {
  EXPECT_EQ(to_string(WearStage::kRunningIn), "running-in");
  EXPECT_EQ(to_string(WearStage::kStable), "stable");
  EXPECT_EQ(to_string(TrendLabel::kRising), "rising");
  EXPECT_EQ(to_string(TrendLabel::kFalling), "falling");
}
