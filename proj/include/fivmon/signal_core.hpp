#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fivmon {

// Closed frequency interval [lo_hz, hi_hz] used for searches; band ranges are
// reported half-open, see hwpt.hpp.
struct FrequencyRange {
  double lo_hz = 0.0;
  double hi_hz = 0.0;

  bool contains(double f) const { return f >= lo_hz && f <= hi_hz; }
  double width() const { return hi_hz - lo_hz; }
};

// Marks a record produced by band extraction.
struct BandTag {
  int level = 0;
  int band_index = 0;
  FrequencyRange range;
};

// Uniformly sampled acceleration record. Immutable once constructed; the
// constructor rejects empty, non-finite, or badly-rated input.
class TimeSeriesRecord {
 public:
  TimeSeriesRecord(std::vector<double> samples, double sample_rate_hz,
                   std::optional<double> t_capture_s = std::nullopt,
                   std::string channel_label = {}, std::string unit = "m/s^2");

  const std::vector<double>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double sample_rate() const { return sample_rate_; }
  double duration() const { return static_cast<double>(samples_.size()) / sample_rate_; }
  const std::optional<double>& t_capture() const { return t_capture_; }
  const std::string& channel_label() const { return channel_label_; }
  const std::string& unit() const { return unit_; }
  const std::optional<BandTag>& band_tag() const { return band_tag_; }

  // Copy carrying the same metadata but different samples.
  TimeSeriesRecord with_samples(std::vector<double> samples) const;
  TimeSeriesRecord with_band_tag(BandTag tag) const;
  TimeSeriesRecord scaled(double factor) const;

 private:
  std::vector<double> samples_;
  double sample_rate_;
  std::optional<double> t_capture_;
  std::string channel_label_;
  std::string unit_;
  std::optional<BandTag> band_tag_;
};

// One-sided power spectral density. DC and Nyquist bins are not doubled, so
// sum(power) * resolution_hz equals the mean square of the (window-corrected)
// input.
struct PowerSpectrum {
  std::vector<double> frequencies;
  std::vector<double> power;
  double resolution_hz = 0.0;
  std::string estimator_tag;

  std::size_t size() const { return frequencies.size(); }
  // Rectangle-rule integral of power over the whole support.
  double integrated_power() const;
};

struct SpectralPeak {
  double frequency = 0.0;
  double power = 0.0;
  double prominence = 0.0;
};

struct WelchOptions {
  std::size_t segment_length = 2048;
  double overlap_fraction = 0.5;
};

// Welch averaged periodogram with a periodic Hann window.
PowerSpectrum compute_power_spectrum(const TimeSeriesRecord& record,
                                     std::size_t segment_length = 2048,
                                     double overlap_fraction = 0.5);
inline PowerSpectrum compute_power_spectrum(const TimeSeriesRecord& record,
                                            const WelchOptions& opts) {
  return compute_power_spectrum(record, opts.segment_length, opts.overlap_fraction);
}

// Average of Hann-corrected segment mean squares: the quantity the Welch PSD
// integrates to exactly.
double windowed_mean_square(const TimeSeriesRecord& record, std::size_t segment_length = 2048,
                            double overlap_fraction = 0.5);

double rms(std::span<const double> samples);
double rms(const TimeSeriesRecord& record);
double mean_square(std::span<const double> samples);

// Local maxima inside search_range whose topographic prominence (measured
// within the range) is at least min_prominence_ratio times the largest power
// in the range. Sorted by descending power, ties by ascending frequency.
std::vector<SpectralPeak> detect_peaks(const PowerSpectrum& spectrum, double min_prominence_ratio,
                                       FrequencyRange search_range);

// Frequency of the largest power in search_range; ties go to the lower frequency.
double dominant_frequency(const PowerSpectrum& spectrum, FrequencyRange search_range);

}  // namespace fivmon
