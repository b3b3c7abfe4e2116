#include "fivmon/fiv_extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fivmon/error.hpp"

namespace fivmon {

ReferenceFrequency identify_reference_frequency(const std::vector<TimeSeriesRecord>& squeal_records,
                                                FrequencyRange search_range,
                                                const WelchOptions& psd) {
  if (squeal_records.empty()) throw InputError("identify_reference_frequency: no records");

  ReferenceFrequency out;
  for (std::size_t i = 0; i < squeal_records.size(); ++i) {
    const auto& rec = squeal_records[i];
    if (!(search_range.hi_hz <= rec.sample_rate() / 2.0)) {
      throw InputError("identify_reference_frequency: search range exceeds Nyquist of record " +
                       std::to_string(i));
    }
    try {
      const auto spectrum = compute_power_spectrum(rec, psd);
      out.per_record_hz.push_back(dominant_frequency(spectrum, search_range));
      out.used_records.push_back(i);
    } catch (const AnalysisError& e) {
      out.warnings.push_back("record " + std::to_string(i) + " skipped: " + e.what());
    }
  }
  if (out.per_record_hz.empty()) {
    throw AnalysisError("identify_reference_frequency: no record has a dominant component in range");
  }
  const double sum = std::accumulate(out.per_record_hz.begin(), out.per_record_hz.end(), 0.0);
  out.mean_hz = sum / static_cast<double>(out.per_record_hz.size());
  const auto [lo, hi] = std::minmax_element(out.per_record_hz.begin(), out.per_record_hz.end());
  out.spread_hz = *hi - *lo;
  return out;
}

int BandOccupancy::most_occupied_band() const {
  if (counts.empty()) return -1;
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

BandOccupancy band_occupancy_histogram(const std::vector<TimeSeriesRecord>& records, int level,
                                       FrequencyRange search_range, const WelchOptions& psd) {
  if (records.empty()) throw InputError("band_occupancy_histogram: no records");
  const double fs = records.front().sample_rate();
  for (const auto& r : records) {
    if (r.sample_rate() != fs) throw InputError("band_occupancy_histogram: mixed sample rates");
  }

  BandOccupancy out;
  out.level = level;
  out.counts.assign(std::size_t{1} << level, 0);
  std::size_t used = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto plan = make_hwpt_plan(records[i].size(), fs, level);
    if (!(search_range.hi_hz <= fs / 2.0)) {
      throw InputError("band_occupancy_histogram: search range exceeds Nyquist");
    }
    try {
      const double f = dominant_frequency(compute_power_spectrum(records[i], psd), search_range);
      const int band = select_band_for_frequency(plan, f);
      out.band_per_record.push_back(band);
      out.dominant_hz.push_back(f);
      ++out.counts[static_cast<std::size_t>(band)];
      ++used;
    } catch (const AnalysisError& e) {
      out.band_per_record.push_back(-1);
      out.dominant_hz.push_back(std::numeric_limits<double>::quiet_NaN());
      out.warnings.push_back("record " + std::to_string(i) + " skipped: " + e.what());
    }
  }
  if (used == 0) {
    throw AnalysisError("band_occupancy_histogram: no record has a dominant component in range");
  }
  return out;
}

TimeSeriesRecord extract_fiv(const TimeSeriesRecord& record, int level, int band_index) {
  const auto decomposition = hwpt_decompose(record, level);
  return reconstruct_band(decomposition, band_index);
}

RmsSeries aggregate_windows(const std::vector<double>& t_capture_s,
                            const std::vector<double>& values, double window_seconds) {
  if (!(window_seconds > 0.0 && std::isfinite(window_seconds))) {
    throw InputError("rms_series: window_seconds must be positive");
  }
  if (t_capture_s.size() != values.size()) throw InputError("rms_series: length mismatch");
  if (values.empty()) throw InputError("rms_series: no records");

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return t_capture_s[a] < t_capture_s[b]; });

  RmsSeries out;
  out.window_seconds = window_seconds;
  long long current = 0;
  double sum = 0.0;
  std::size_t count = 0;
  auto flush = [&]() {
    if (count == 0) return;
    out.window_centers.push_back((static_cast<double>(current) + 0.5) * window_seconds);
    out.rms_values.push_back(sum / static_cast<double>(count));
    out.records_per_window.push_back(count);
  };
  for (std::size_t idx : order) {
    const auto w = static_cast<long long>(std::floor(t_capture_s[idx] / window_seconds));
    if (count > 0 && w != current) {
      flush();
      sum = 0.0;
      count = 0;
    }
    current = w;
    sum += values[idx];
    ++count;
  }
  flush();
  return out;
}

RmsSeries rms_series(const std::vector<TimeSeriesRecord>& records, int level, int band_index,
                     double window_seconds) {
  if (records.empty()) throw InputError("rms_series: no records");
  if (!(window_seconds > 0.0 && std::isfinite(window_seconds))) {
    throw InputError("rms_series: window_seconds must be positive");
  }
  std::vector<double> times;
  std::vector<double> values;
  times.reserve(records.size());
  values.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].t_capture()) {
      throw InputError("rms_series: record " + std::to_string(i) + " has no t_capture");
    }
    times.push_back(*records[i].t_capture());
    values.push_back(rms(extract_fiv(records[i], level, band_index)));
  }
  return aggregate_windows(times, values, window_seconds);
}

}  // namespace fivmon
