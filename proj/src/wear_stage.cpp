#include "fivmon/wear_stage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fivmon/error.hpp"

namespace fivmon {

namespace {

struct LinearPart {
  double level = 0.0;  // asymptote
  double amp = 0.0;    // value at origin minus asymptote
  double sse = 0.0;
};

LinearPart fit_for_tau(const std::vector<double>& t, const std::vector<double>& y, double t0,
                       double tau) {
  const auto n = static_cast<double>(t.size());
  std::vector<double> e(t.size());
  double e_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    e[i] = std::exp(-(t[i] - t0) / tau);
    e_mean += e[i];
    y_mean += y[i];
  }
  e_mean /= n;
  y_mean /= n;
  double see = 0.0;
  double sey = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    see += (e[i] - e_mean) * (e[i] - e_mean);
    sey += (e[i] - e_mean) * (y[i] - y_mean);
  }
  LinearPart out;
  out.amp = see > 0.0 ? sey / see : 0.0;
  out.level = y_mean - out.amp * e_mean;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = y[i] - (out.level + out.amp * e[i]);
    out.sse += r * r;
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

FrictionTrace::FrictionTrace(std::vector<double> times_min, std::vector<double> mu_values)
    : times_(std::move(times_min)), mu_(std::move(mu_values)) {
  if (times_.size() != mu_.size()) throw InputError("friction trace: length mismatch");
  if (times_.empty()) throw InputError("friction trace: empty");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) throw InputError("friction trace: non-finite time");
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw InputError("friction trace: times must be strictly increasing");
    }
    if (!(std::isfinite(mu_[i]) && mu_[i] > 0.0 && mu_[i] < 2.0)) {
      throw InputError("friction trace: friction coefficient out of (0, 2) at index " +
                       std::to_string(i));
    }
  }
}

double TrendFit::value_at(double t) const {
  if (no_decay) return mu_inf;
  return mu_inf + (mu0 - mu_inf) * std::exp(-(t - t_origin) / tau);
}

double TrendFit::slope_at(double t) const {
  if (no_decay) return 0.0;
  return -(mu0 - mu_inf) / tau * std::exp(-(t - t_origin) / tau);
}

TrendFit fit_exponential_trend(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size()) throw InputError("trend fit: length mismatch");
  if (t.size() < 8) throw InputError("trend fit: need at least 8 points");
  const double t0 = t.front();
  const double span = t.back() - t0;
  if (!(span > 0.0)) throw InputError("trend fit: time span must be positive");

  TrendFit fit;
  fit.t_origin = t0;

  const auto [ymin, ymax] = std::minmax_element(y.begin(), y.end());
  const double scale = std::max(std::abs(*ymin), std::abs(*ymax));
  if (*ymax - *ymin <= 1e-12 * scale) {
    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    double sse = 0.0;
    for (double v : y) sse += (v - mean) * (v - mean);
    fit.mu0 = fit.mu_inf = mean;
    fit.tau = span;
    fit.rmse = std::sqrt(sse / static_cast<double>(y.size()));
    fit.no_decay = true;
    return fit;
  }

  const double log_lo = std::log(span / 1000.0);
  const double log_hi = std::log(span * 1000.0);
  constexpr int kGrid = 241;
  std::vector<double> grid_sse(kGrid);
  int best = 0;
  for (int i = 0; i < kGrid; ++i) {
    const double lt = log_lo + (log_hi - log_lo) * i / (kGrid - 1);
    grid_sse[i] = fit_for_tau(t, y, t0, std::exp(lt)).sse;
    if (grid_sse[i] < grid_sse[best]) best = i;
  }

  // Golden-section refinement on log(tau) around the best grid point.
  auto grid_at = [&](int i) { return log_lo + (log_hi - log_lo) * i / (kGrid - 1); };
  double a = grid_at(std::max(best - 1, 0));
  double b = grid_at(std::min(best + 1, kGrid - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fit_for_tau(t, y, t0, std::exp(c)).sse;
  double fd = fit_for_tau(t, y, t0, std::exp(d)).sse;
  for (int iter = 0; iter < 100 && (b - a) > 1e-12; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fit_for_tau(t, y, t0, std::exp(c)).sse;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fit_for_tau(t, y, t0, std::exp(d)).sse;
    }
  }
  double log_tau = 0.5 * (a + b);
  LinearPart part = fit_for_tau(t, y, t0, std::exp(log_tau));
  if (grid_sse[best] < part.sse) {
    log_tau = grid_at(best);
    part = fit_for_tau(t, y, t0, std::exp(log_tau));
  }

  fit.tau = std::exp(log_tau);
  fit.mu_inf = part.level;
  fit.mu0 = part.level + part.amp;
  fit.rmse = std::sqrt(part.sse / static_cast<double>(y.size()));
  return fit;
}

TrendFit fit_friction_trend(const FrictionTrace& trace) {
  return fit_exponential_trend(trace.times(), trace.mu_values());
}

std::string to_string(WearStage s) {
  return s == WearStage::kRunningIn ? "running-in" : "stable";
}

std::string to_string(TrendLabel t) {
  switch (t) {
    case TrendLabel::kRising:
      return "rising";
    case TrendLabel::kFalling:
      return "falling";
    case TrendLabel::kStable:
      return "stable";
    case TrendLabel::kInsufficientData:
      break;
  }
  return "insufficient data";
}

namespace {

StageSegmentation two_stage(double start, double boundary, double end) {
  StageSegmentation seg;
  seg.boundary_minutes = std::clamp(boundary, start, end);
  if (seg.boundary_minutes > start) {
    seg.stages.push_back({WearStage::kRunningIn, start, seg.boundary_minutes});
  }
  if (seg.boundary_minutes < end || seg.stages.empty()) {
    seg.stages.push_back({WearStage::kStable, seg.boundary_minutes, end});
  }
  return seg;
}

}  // namespace

StageSegmentation segment_stages(const TrendFit& fit, const FrictionTrace& trace,
                                 double slope_threshold) {
  if (!(slope_threshold > 0.0 && std::isfinite(slope_threshold))) {
    throw InputError("segment_stages: slope_threshold must be positive");
  }
  if (!fit.no_decay && !(fit.tau > 0.0)) throw InputError("segment_stages: invalid fit");
  const double start = trace.start();
  const double end = trace.end();
  const std::string tag = "exp-fit;boundary=first |dmu/dt| < " + format_double(slope_threshold) +
                          " per min";

  if (fit.no_decay) {
    auto seg = two_stage(start, start, end);
    seg.method_tag = tag;
    seg.flags.push_back("no_decay");
    return seg;
  }

  // |slope| = |delta|/tau * exp(-(t - t0)/tau) is monotone decreasing.
  const double initial_slope = std::abs(fit.mu0 - fit.mu_inf) / fit.tau;
  double boundary = fit.t_origin;
  if (initial_slope >= slope_threshold) {
    boundary = fit.t_origin + fit.tau * std::log(initial_slope / slope_threshold);
  }
  if (boundary > end) {
    StageSegmentation seg;
    seg.boundary_minutes = end;
    seg.stages.push_back({WearStage::kRunningIn, start, end});
    seg.method_tag = tag;
    seg.flags.push_back("threshold_not_reached");
    return seg;
  }
  auto seg = two_stage(start, boundary, end);
  seg.method_tag = tag;
  return seg;
}

StageSegmentation segment_stages_from_rms(const RmsSeries& series, double settle_fraction) {
  if (!(settle_fraction > 0.0 && settle_fraction < 1.0)) {
    throw InputError("segment_stages_from_rms: settle_fraction must be in (0, 1)");
  }
  std::vector<double> t_min(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) t_min[i] = series.window_centers[i] / 60.0;
  const TrendFit fit = fit_exponential_trend(t_min, series.rms_values);
  const double start = t_min.front();
  const double end = t_min.back();
  const std::string tag =
      "rms-exp-fit;boundary=settled to " + format_double(settle_fraction) + " of amplitude";

  StageSegmentation seg;
  if (fit.no_decay) {
    seg = two_stage(start, start, end);
    seg.flags.push_back("no_decay");
  } else {
    const double boundary = fit.t_origin + fit.tau * std::log(1.0 / settle_fraction);
    if (boundary > end) {
      seg.boundary_minutes = end;
      seg.stages.push_back({WearStage::kRunningIn, start, end});
      seg.flags.push_back("threshold_not_reached");
    } else {
      seg = two_stage(start, boundary, end);
    }
  }
  seg.method_tag = tag;
  seg.flags.push_back("rms_only_segmentation");
  return seg;
}

RmsTrendReport classify_rms_trend(const RmsSeries& series, const StageSegmentation& segmentation,
                                  double z) {
  if (segmentation.stages.empty()) throw InputError("classify_rms_trend: no stages");
  if (!(z > 0.0)) throw InputError("classify_rms_trend: z must be positive");

  RmsTrendReport report;
  report.method_tag = "ols-slope;z=" + format_double(z);
  const std::size_t n_stages = segmentation.stages.size();
  for (std::size_t s = 0; s < n_stages; ++s) {
    const auto& interval = segmentation.stages[s];
    StageTrend trend;
    trend.interval = interval;

    std::vector<double> t;
    std::vector<double> y;
    for (std::size_t i = 0; i < series.size(); ++i) {
      const double tm = series.window_centers[i] / 60.0;
      // The first stage takes everything before its end, the last everything
      // from its start on, so points outside the trace span are not lost.
      const bool after_start = s == 0 || tm >= interval.start_min;
      const bool before_end = s + 1 == n_stages || tm < interval.end_min;
      if (after_start && before_end) {
        t.push_back(tm);
        y.push_back(series.rms_values[i]);
      }
    }
    trend.n_points = t.size();
    if (!y.empty()) {
      trend.mean_rms = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
    }
    if (t.size() >= 3) {
      const auto n = static_cast<double>(t.size());
      const double t_mean = std::accumulate(t.begin(), t.end(), 0.0) / n;
      double sxx = 0.0;
      double sxy = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        sxx += (t[i] - t_mean) * (t[i] - t_mean);
        sxy += (t[i] - t_mean) * (y[i] - trend.mean_rms);
      }
      trend.slope_per_min = sxy / sxx;
      double ssr = 0.0;
      double scale = 0.0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        const double r = y[i] - (trend.mean_rms + trend.slope_per_min * (t[i] - t_mean));
        ssr += r * r;
        scale = std::max(scale, std::abs(y[i]));
      }
      trend.slope_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
      // Round-off floor: a change across the stage below 1e-9 of the series
      // magnitude counts as zero slope.
      const double change = std::abs(trend.slope_per_min) * (t.back() - t.front());
      if (change <= 1e-9 * scale) {
        trend.label = TrendLabel::kStable;
      } else if (trend.slope_per_min > z * trend.slope_stderr) {
        trend.label = TrendLabel::kRising;
      } else if (trend.slope_per_min < -z * trend.slope_stderr) {
        trend.label = TrendLabel::kFalling;
      } else {
        trend.label = TrendLabel::kStable;
      }
    }
    report.stages.push_back(trend);
  }

  const StageTrend* running = nullptr;
  const StageTrend* stable = nullptr;
  for (const auto& st : report.stages) {
    if (st.interval.stage == WearStage::kRunningIn && st.n_points > 0) running = &st;
    if (st.interval.stage == WearStage::kStable && st.n_points > 0) stable = &st;
  }
  if (running != nullptr && stable != nullptr && running->mean_rms > 0.0) {
    report.stage_mean_ratio = stable->mean_rms / running->mean_rms;
  }
  return report;
}

}  // namespace fivmon
