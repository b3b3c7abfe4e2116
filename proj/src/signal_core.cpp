#include "fivmon/signal_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "fivmon/error.hpp"
#include "fivmon/fft.hpp"

namespace fivmon {

namespace {

std::vector<double> periodic_hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                 static_cast<double>(n)));
  }
  return w;
}

std::size_t hop_for(std::size_t segment_length, double overlap_fraction) {
  const auto overlap =
      static_cast<std::size_t>(std::llround(static_cast<double>(segment_length) * overlap_fraction));
  return std::max<std::size_t>(1, segment_length - std::min(overlap, segment_length - 1));
}

void check_welch_args(const TimeSeriesRecord& record, std::size_t segment_length,
                      double overlap_fraction) {
  if (segment_length < 2) throw InputError("power spectrum: segment_length must be >= 2");
  if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
    throw InputError("power spectrum: overlap_fraction must be in [0, 1)");
  }
  if (record.size() < segment_length) {
    throw InputError("power spectrum: insufficient samples (" + std::to_string(record.size()) +
                     " < segment_length " + std::to_string(segment_length) + ")");
  }
}

// Inclusive index span of spectrum bins inside range.
std::pair<std::size_t, std::size_t> bins_in_range(const PowerSpectrum& s, FrequencyRange r,
                                                  const char* who) {
  if (s.frequencies.empty() || s.frequencies.size() != s.power.size()) {
    throw InputError(std::string(who) + ": malformed spectrum");
  }
  if (!(r.hi_hz >= r.lo_hz)) throw InputError(std::string(who) + ": empty search range");
  const auto first = std::lower_bound(s.frequencies.begin(), s.frequencies.end(), r.lo_hz);
  const auto last = std::upper_bound(s.frequencies.begin(), s.frequencies.end(), r.hi_hz);
  if (first >= last) throw InputError(std::string(who) + ": empty search range");
  return {static_cast<std::size_t>(first - s.frequencies.begin()),
          static_cast<std::size_t>(last - s.frequencies.begin()) - 1};
}

}  // namespace

TimeSeriesRecord::TimeSeriesRecord(std::vector<double> samples, double sample_rate_hz,
                                   std::optional<double> t_capture_s, std::string channel_label,
                                   std::string unit)
    : samples_(std::move(samples)),
      sample_rate_(sample_rate_hz),
      t_capture_(t_capture_s),
      channel_label_(std::move(channel_label)),
      unit_(std::move(unit)) {
  if (!(std::isfinite(sample_rate_) && sample_rate_ > 0.0)) {
    throw InputError("record: sample_rate must be positive and finite");
  }
  if (samples_.empty()) throw InputError("record: samples must be non-empty");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw InputError("record: non-finite sample at index " + std::to_string(i));
    }
  }
  if (t_capture_ && !std::isfinite(*t_capture_)) {
    throw InputError("record: t_capture must be finite");
  }
}

TimeSeriesRecord TimeSeriesRecord::with_samples(std::vector<double> samples) const {
  TimeSeriesRecord out(std::move(samples), sample_rate_, t_capture_, channel_label_, unit_);
  out.band_tag_ = band_tag_;
  return out;
}

TimeSeriesRecord TimeSeriesRecord::with_band_tag(BandTag tag) const {
  TimeSeriesRecord out = *this;
  out.band_tag_ = tag;
  return out;
}

TimeSeriesRecord TimeSeriesRecord::scaled(double factor) const {
  std::vector<double> s = samples_;
  for (auto& v : s) v *= factor;
  return with_samples(std::move(s));
}

double PowerSpectrum::integrated_power() const {
  double sum = 0.0;
  for (double p : power) sum += p;
  return sum * resolution_hz;
}

PowerSpectrum compute_power_spectrum(const TimeSeriesRecord& record, std::size_t segment_length,
                                     double overlap_fraction) {
  check_welch_args(record, segment_length, overlap_fraction);

  const auto& x = record.samples();
  const double fs = record.sample_rate();
  const auto window = periodic_hann(segment_length);
  double window_power = 0.0;
  for (double w : window) window_power += w * w;

  const std::size_t hop = hop_for(segment_length, overlap_fraction);
  const std::size_t n_bins = segment_length / 2 + 1;
  std::vector<double> acc(n_bins, 0.0);
  std::size_t n_segments = 0;

  std::vector<double> seg(segment_length);
  for (std::size_t start = 0; start + segment_length <= x.size(); start += hop) {
    for (std::size_t i = 0; i < segment_length; ++i) seg[i] = x[start + i] * window[i];
    const auto spec = fft::forward_real(seg);
    for (std::size_t k = 0; k < n_bins; ++k) acc[k] += std::norm(spec[k]);
    ++n_segments;
  }

  PowerSpectrum out;
  out.resolution_hz = fs / static_cast<double>(segment_length);
  out.frequencies.resize(n_bins);
  out.power.resize(n_bins);
  const double scale = 1.0 / (fs * window_power * static_cast<double>(n_segments));
  const bool even = segment_length % 2 == 0;
  for (std::size_t k = 0; k < n_bins; ++k) {
    out.frequencies[k] = static_cast<double>(k) * out.resolution_hz;
    const bool unpaired = k == 0 || (even && k == n_bins - 1);
    out.power[k] = acc[k] * scale * (unpaired ? 1.0 : 2.0);
  }
  out.estimator_tag = "welch;window=hann-periodic;segment=" + std::to_string(segment_length) +
                      ";hop=" + std::to_string(hop) + ";segments=" + std::to_string(n_segments) +
                      ";onesided-density;dc-nyquist-unscaled";
  return out;
}

double windowed_mean_square(const TimeSeriesRecord& record, std::size_t segment_length,
                            double overlap_fraction) {
  check_welch_args(record, segment_length, overlap_fraction);
  const auto& x = record.samples();
  const auto window = periodic_hann(segment_length);
  double window_power = 0.0;
  for (double w : window) window_power += w * w;
  const std::size_t hop = hop_for(segment_length, overlap_fraction);
  double total = 0.0;
  std::size_t n_segments = 0;
  for (std::size_t start = 0; start + segment_length <= x.size(); start += hop) {
    double s = 0.0;
    for (std::size_t i = 0; i < segment_length; ++i) {
      const double v = x[start + i] * window[i];
      s += v * v;
    }
    total += s / window_power;
    ++n_segments;
  }
  return total / static_cast<double>(n_segments);
}

double mean_square(std::span<const double> samples) {
  if (samples.empty()) throw InputError("rms: empty input");
  double sum = 0.0;
  for (double v : samples) sum += v * v;
  return sum / static_cast<double>(samples.size());
}

double rms(std::span<const double> samples) { return std::sqrt(mean_square(samples)); }

double rms(const TimeSeriesRecord& record) { return rms(std::span<const double>(record.samples())); }

std::vector<SpectralPeak> detect_peaks(const PowerSpectrum& spectrum, double min_prominence_ratio,
                                       FrequencyRange search_range) {
  if (!(min_prominence_ratio > 0.0 && min_prominence_ratio <= 1.0)) {
    throw InputError("detect_peaks: min_prominence_ratio must be in (0, 1]");
  }
  const auto [lo, hi] = bins_in_range(spectrum, search_range, "detect_peaks");
  const auto& p = spectrum.power;

  double max_power = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) max_power = std::max(max_power, p[i]);
  std::vector<SpectralPeak> peaks;
  if (max_power <= 0.0) return peaks;
  const double threshold = min_prominence_ratio * max_power;

  std::size_t i = lo + 1;
  while (i < hi) {
    if (!(p[i] > p[i - 1])) {
      ++i;
      continue;
    }
    // Walk across a plateau; the peak is reported at its lowest frequency.
    std::size_t j = i;
    while (j < hi && p[j + 1] == p[i]) ++j;
    if (j >= hi || !(p[j + 1] < p[i])) {
      i = j + 1;
      continue;
    }

    double left_min = p[i];
    for (std::size_t k = i; k-- > lo;) {
      if (p[k] > p[i]) break;
      left_min = std::min(left_min, p[k]);
    }
    double right_min = p[i];
    for (std::size_t k = j + 1; k <= hi; ++k) {
      if (p[k] > p[i]) break;
      right_min = std::min(right_min, p[k]);
    }
    const double prominence = p[i] - std::max(left_min, right_min);
    if (prominence > 0.0 && prominence >= threshold) {
      peaks.push_back({spectrum.frequencies[i], p[i], prominence});
    }
    i = j + 1;
  }

  std::stable_sort(peaks.begin(), peaks.end(), [](const SpectralPeak& a, const SpectralPeak& b) {
    return a.power > b.power;
  });
  return peaks;
}

double dominant_frequency(const PowerSpectrum& spectrum, FrequencyRange search_range) {
  const auto [lo, hi] = bins_in_range(spectrum, search_range, "dominant_frequency");
  std::size_t best = lo;
  for (std::size_t i = lo + 1; i <= hi; ++i) {
    if (spectrum.power[i] > spectrum.power[best]) best = i;
  }
  if (!(spectrum.power[best] > 0.0)) {
    throw AnalysisError("dominant_frequency: no dominant component in range");
  }
  return spectrum.frequencies[best];
}

}  // namespace fivmon
