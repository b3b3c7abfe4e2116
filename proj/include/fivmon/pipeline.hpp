#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fivmon/fiv_extraction.hpp"
#include "fivmon/lubrication.hpp"
#include "fivmon/record_io.hpp"
#include "fivmon/synth.hpp"
#include "fivmon/wear_stage.hpp"

namespace fivmon {

struct PipelineConfig {
  int hwpt_level = 7;
  FrequencyRange squeal_search_range_hz = kDefaultSquealSearchRange;
  double rms_window_s = 60.0;
  double slope_threshold_per_min = kDefaultSlopeThreshold;
  WelchOptions psd;
  std::string channel;  // empty: first column
  double trend_z = kDefaultTrendZ;
  double settle_fraction = 0.05;  // RMS-only segmentation
  unsigned threads = 0;           // 0: hardware concurrency; not serialised

  void validate() const;
  bool operator==(const PipelineConfig& other) const;
};

nlohmann::json config_to_json(const PipelineConfig& config);
// Missing keys keep their defaults; unknown keys are rejected.
PipelineConfig config_from_json(const nlohmann::json& j);

struct BandSelection {
  int level = 0;
  int band_index = 0;
  FrequencyRange range;  // half-open [lo, hi)
};

BandSelection select_band(const TimeSeriesRecord& like, int level, double reference_hz);

struct IdentifyReport {
  ReferenceFrequency reference;
  BandSelection band;
  std::vector<std::string> record_names;  // parallel to reference.per_record_hz
  std::vector<std::string> errors;        // unreadable inputs
};

IdentifyReport identify(const std::vector<TimeSeriesRecord>& squeal_records,
                        const PipelineConfig& config,
                        const std::vector<std::string>& record_names = {});

struct AnalysisInputs {
  std::vector<TimeSeriesRecord> records;
  std::optional<FrictionTrace> friction;
  std::vector<TimeSeriesRecord> squeal_records;  // optional reference source
  std::optional<double> reference_hz;            // explicit override
  std::optional<io::LubricationParams> lubrication;
};

struct AnalysisReport {
  ReferenceFrequency reference;
  std::string reference_source;  // "override", "squeal", "records"
  BandSelection band;
  BandOccupancy occupancy;
  std::vector<double> per_record_rms;
  std::vector<double> per_record_t_s;
  RmsSeries rms_series;
  std::optional<TrendFit> friction_fit;
  StageSegmentation segmentation;
  RmsTrendReport trends;
  std::optional<LubricationReport> lubrication;
  PowerSpectrum mean_spectrum;
  std::vector<std::string> flags;  // degenerate-case markers
  std::vector<std::string> notes;
};

AnalysisReport analyze(const AnalysisInputs& inputs, const PipelineConfig& config);

// Average of per-record Welch spectra.
PowerSpectrum mean_power_spectrum(const std::vector<TimeSeriesRecord>& records,
                                  const WelchOptions& psd);

struct InputDigest {
  std::string name;
  std::string sha256;
};

struct Provenance {
  std::string tool_version = FIVMON_VERSION;
  std::string generated_at;  // ISO-8601; CLI accepts an override for reproducibility
  std::vector<InputDigest> inputs;
};

nlohmann::json reference_to_json(const ReferenceFrequency& ref);
nlohmann::json band_to_json(const BandSelection& band);
nlohmann::json lubrication_to_json(const LubricationReport& report);
nlohmann::json identify_to_json(const IdentifyReport& report, const PipelineConfig& config,
                                const Provenance& provenance);
nlohmann::json report_to_json(const AnalysisReport& report, const PipelineConfig& config,
                              const Provenance& provenance);

// Synthetic experiment description used by the synth command. Missing keys
// keep the RuninScenario defaults; the "squeal" block controls the dry
// squeal fixtures written alongside the running-in records.
struct SynthScenario {
  RuninScenario runin;
  std::vector<double> squeal_freqs_hz = kReferenceSquealFrequencies;
  double squeal_snr_db = 20.0;
};

nlohmann::json scenario_to_json(const SynthScenario& scenario);
SynthScenario scenario_from_json(const nlohmann::json& j);

}  // namespace fivmon
