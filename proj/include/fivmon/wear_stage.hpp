#pragma once

#include <string>
#include <vector>

#include "fivmon/fiv_extraction.hpp"

namespace fivmon {

// Friction coefficient samples over experiment time (minutes).
class FrictionTrace {
 public:
  FrictionTrace(std::vector<double> times_min, std::vector<double> mu_values);

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& mu_values() const { return mu_; }
  std::size_t size() const { return times_.size(); }
  double start() const { return times_.front(); }
  double end() const { return times_.back(); }

 private:
  std::vector<double> times_;
  std::vector<double> mu_;
};

// mu(t) = mu_inf + (mu0 - mu_inf) * exp(-(t - t_origin) / tau)
struct TrendFit {
  double mu0 = 0.0;
  double mu_inf = 0.0;
  double tau = 0.0;       // minutes
  double rmse = 0.0;
  double t_origin = 0.0;  // first sample time
  bool no_decay = false;

  double value_at(double t) const;
  double slope_at(double t) const;
};

inline constexpr double kDefaultSlopeThreshold = 4.75e-5;  // per minute
inline constexpr double kDefaultTrendZ = 2.0;

// Least-squares exponential fit. For a fixed tau the problem is linear in
// (mu_inf, mu0 - mu_inf); tau is found by a log-spaced scan refined with a
// golden-section search, bounded to [span/1000, 1000*span].
TrendFit fit_friction_trend(const FrictionTrace& trace);

// Same fit on arbitrary (t, y) data; used for RMS-only segmentation.
TrendFit fit_exponential_trend(const std::vector<double>& t, const std::vector<double>& y);

enum class WearStage { kRunningIn, kStable };
std::string to_string(WearStage s);

struct StageInterval {
  WearStage stage = WearStage::kRunningIn;
  double start_min = 0.0;
  double end_min = 0.0;
};

struct StageSegmentation {
  double boundary_minutes = 0.0;
  std::vector<StageInterval> stages;
  std::string method_tag;
  std::vector<std::string> flags;  // "no_decay", "threshold_not_reached", ...
};

// Boundary = earliest t where |d mu_fit / dt| < slope_threshold, clamped to
// the trace span.
StageSegmentation segment_stages(const TrendFit& fit, const FrictionTrace& trace,
                                 double slope_threshold = kDefaultSlopeThreshold);

// Fallback when no friction trace is available: fit the exponential model to
// the RMS series and put the boundary where the transient has settled to
// settle_fraction of its amplitude.
StageSegmentation segment_stages_from_rms(const RmsSeries& series, double settle_fraction = 0.05);

enum class TrendLabel { kRising, kFalling, kStable, kInsufficientData };
std::string to_string(TrendLabel t);

struct StageTrend {
  StageInterval interval;
  TrendLabel label = TrendLabel::kInsufficientData;
  double slope_per_min = 0.0;
  double slope_stderr = 0.0;
  double mean_rms = 0.0;
  std::size_t n_points = 0;
};

struct RmsTrendReport {
  std::vector<StageTrend> stages;
  // stable-stage mean / running-in mean; 0 when either stage is missing.
  double stage_mean_ratio = 0.0;
  std::string method_tag;
};

// Per stage OLS slope of RMS against time (minutes) with a z-sigma rule.
RmsTrendReport classify_rms_trend(const RmsSeries& series, const StageSegmentation& segmentation,
                                  double z = kDefaultTrendZ);

}  // namespace fivmon
