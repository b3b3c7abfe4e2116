#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fivmon/hwpt.hpp"
#include "fivmon/signal_core.hpp"

namespace fivmon {

// Squeal search band: wide enough for the 2.3-2.4 kHz squeal cluster, clear of
// the 319 / 853 Hz machine harmonics.
inline constexpr FrequencyRange kDefaultSquealSearchRange{1000.0, 5000.0};

struct ReferenceFrequency {
  double mean_hz = 0.0;
  std::vector<double> per_record_hz;
  double spread_hz = 0.0;
  std::vector<std::size_t> used_records;     // indices into the input list
  std::vector<std::string> warnings;         // one per skipped record
};

// Dominant in-range PSD peak per record, averaged. Records without a dominant
// component are skipped with a warning; throws AnalysisError if all are.
ReferenceFrequency identify_reference_frequency(const std::vector<TimeSeriesRecord>& squeal_records,
                                                FrequencyRange search_range = kDefaultSquealSearchRange,
                                                const WelchOptions& psd = {});

struct BandOccupancy {
  int level = 0;
  std::vector<std::size_t> counts;            // size 2^level
  std::vector<int> band_per_record;           // -1 for skipped records
  std::vector<double> dominant_hz;            // NaN for skipped records
  std::vector<std::string> warnings;

  int most_occupied_band() const;             // lowest index among ties
};

BandOccupancy band_occupancy_histogram(const std::vector<TimeSeriesRecord>& records, int level,
                                       FrequencyRange search_range = kDefaultSquealSearchRange,
                                       const WelchOptions& psd = {});

// Decompose and reconstruct a single band; the result carries a BandTag.
TimeSeriesRecord extract_fiv(const TimeSeriesRecord& record, int level, int band_index);

struct RmsSeries {
  std::vector<double> window_centers;         // seconds
  std::vector<double> rms_values;
  double window_seconds = 0.0;
  std::vector<std::size_t> records_per_window;

  std::size_t size() const { return rms_values.size(); }
};

// Per-record RMS of the extracted band, sorted by t_capture and grouped into
// windows [i*w, (i+1)*w); each window reports the mean of its members' RMS.
// Empty windows are omitted. Every record must carry t_capture.
RmsSeries rms_series(const std::vector<TimeSeriesRecord>& records, int level, int band_index,
                     double window_seconds);

// Same aggregation for precomputed per-record values; exposed for reuse by the
// pipeline and for tests.
RmsSeries aggregate_windows(const std::vector<double>& t_capture_s,
                            const std::vector<double>& values, double window_seconds);

}  // namespace fivmon
