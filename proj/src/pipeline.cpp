#include "fivmon/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "fivmon/error.hpp"
#include "fivmon/hwpt.hpp"

namespace fivmon {

using nlohmann::json;

void PipelineConfig::validate() const {
  if (hwpt_level < 1) throw InputError("config: hwpt_level must be >= 1");
  if (!(squeal_search_range_hz.lo_hz >= 0.0 &&
        squeal_search_range_hz.hi_hz > squeal_search_range_hz.lo_hz)) {
    throw InputError("config: squeal_search_range_hz must be [lo, hi] with 0 <= lo < hi");
  }
  if (!(rms_window_s > 0.0)) throw InputError("config: rms_window_s must be > 0");
  if (!(slope_threshold_per_min > 0.0)) throw InputError("config: slope_threshold must be > 0");
  if (psd.segment_length < 2) throw InputError("config: psd_segment_length must be >= 2");
  if (!(psd.overlap_fraction >= 0.0 && psd.overlap_fraction < 1.0)) {
    throw InputError("config: psd_overlap_fraction must be in [0, 1)");
  }
  if (!(trend_z > 0.0)) throw InputError("config: trend_z must be > 0");
  if (!(settle_fraction > 0.0 && settle_fraction < 1.0)) {
    throw InputError("config: settle_fraction must be in (0, 1)");
  }
}

bool PipelineConfig::operator==(const PipelineConfig& o) const {
  return hwpt_level == o.hwpt_level && squeal_search_range_hz.lo_hz == o.squeal_search_range_hz.lo_hz &&
         squeal_search_range_hz.hi_hz == o.squeal_search_range_hz.hi_hz &&
         rms_window_s == o.rms_window_s && slope_threshold_per_min == o.slope_threshold_per_min &&
         psd.segment_length == o.psd.segment_length &&
         psd.overlap_fraction == o.psd.overlap_fraction && channel == o.channel &&
         trend_z == o.trend_z && settle_fraction == o.settle_fraction;
}

json config_to_json(const PipelineConfig& c) {
  return json{{"hwpt_level", c.hwpt_level},
              {"squeal_search_range_hz", {c.squeal_search_range_hz.lo_hz, c.squeal_search_range_hz.hi_hz}},
              {"rms_window_s", c.rms_window_s},
              {"slope_threshold_per_min", c.slope_threshold_per_min},
              {"psd_segment_length", c.psd.segment_length},
              {"psd_overlap_fraction", c.psd.overlap_fraction},
              {"channel", c.channel},
              {"trend_z", c.trend_z},
              {"settle_fraction", c.settle_fraction}};
}

PipelineConfig config_from_json(const json& j) {
  if (!j.is_object()) throw InputError("config: expected a JSON object");
  PipelineConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "hwpt_level") {
        c.hwpt_level = value.get<int>();
      } else if (key == "squeal_search_range_hz") {
        if (!value.is_array() || value.size() != 2) {
          throw InputError("config: squeal_search_range_hz must be [lo, hi]");
        }
        c.squeal_search_range_hz = {value[0].get<double>(), value[1].get<double>()};
      } else if (key == "rms_window_s") {
        c.rms_window_s = value.get<double>();
      } else if (key == "slope_threshold_per_min") {
        c.slope_threshold_per_min = value.get<double>();
      } else if (key == "psd_segment_length") {
        c.psd.segment_length = value.get<std::size_t>();
      } else if (key == "psd_overlap_fraction") {
        c.psd.overlap_fraction = value.get<double>();
      } else if (key == "channel") {
        c.channel = value.get<std::string>();
      } else if (key == "trend_z") {
        c.trend_z = value.get<double>();
      } else if (key == "settle_fraction") {
        c.settle_fraction = value.get<double>();
      } else {
        throw InputError("config: unknown key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

BandSelection select_band(const TimeSeriesRecord& like, int level, double reference_hz) {
  const auto plan = make_hwpt_plan(like.size(), like.sample_rate(), level);
  BandSelection sel;
  sel.level = level;
  sel.band_index = select_band_for_frequency(plan, reference_hz);
  sel.range = band_frequency_range(plan, sel.band_index);
  return sel;
}

IdentifyReport identify(const std::vector<TimeSeriesRecord>& squeal_records,
                        const PipelineConfig& config, const std::vector<std::string>& record_names) {
  config.validate();
  IdentifyReport out;
  out.reference = identify_reference_frequency(squeal_records, config.squeal_search_range_hz, config.psd);
  for (std::size_t idx : out.reference.used_records) {
    out.record_names.push_back(idx < record_names.size() ? record_names[idx]
                                                          : "record " + std::to_string(idx));
  }
  out.band = select_band(squeal_records.at(out.reference.used_records.front()), config.hwpt_level,
                         out.reference.mean_hz);
  return out;
}

PowerSpectrum mean_power_spectrum(const std::vector<TimeSeriesRecord>& records,
                                  const WelchOptions& psd) {
  if (records.empty()) throw InputError("mean_power_spectrum: no records");
  PowerSpectrum mean = compute_power_spectrum(records.front(), psd);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto s = compute_power_spectrum(records[i], psd);
    if (s.size() != mean.size() || s.resolution_hz != mean.resolution_hz) {
      throw InputError("mean_power_spectrum: records disagree on spectrum grid");
    }
    for (std::size_t k = 0; k < s.size(); ++k) mean.power[k] += s.power[k];
  }
  for (auto& p : mean.power) p /= static_cast<double>(records.size());
  mean.estimator_tag += ";mean-of=" + std::to_string(records.size());
  return mean;
}

namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers; output slots are
// preassigned so the result does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        try {
          for (std::size_t i = w; i < n; i += workers) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void check_records(const std::vector<TimeSeriesRecord>& records) {
  if (records.empty()) throw InputError("analyze: no records");
  const double fs = records.front().sample_rate();
  const std::size_t n = records.front().size();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].sample_rate() != fs) {
      throw InputError("analyze: mixed sample rates (record " + std::to_string(i) + ")");
    }
    if (records[i].size() != n) {
      throw InputError("analyze: mixed record lengths (record " + std::to_string(i) + ")");
    }
    if (!records[i].t_capture()) {
      throw InputError("analyze: record " + std::to_string(i) + " has no t_capture");
    }
  }
}

}  // namespace

AnalysisReport analyze(const AnalysisInputs& inputs, const PipelineConfig& config) {
  config.validate();
  check_records(inputs.records);
  const auto& records = inputs.records;
  AnalysisReport out;

  out.occupancy = band_occupancy_histogram(records, config.hwpt_level,
                                           config.squeal_search_range_hz, config.psd);
  if (inputs.reference_hz) {
    out.reference.mean_hz = *inputs.reference_hz;
    out.reference.per_record_hz = {*inputs.reference_hz};
    out.reference_source = "override";
  } else if (!inputs.squeal_records.empty()) {
    out.reference = identify_reference_frequency(inputs.squeal_records,
                                                 config.squeal_search_range_hz, config.psd);
    out.reference_source = "squeal";
  } else {
    // Without squeal data, follow the band most records peak in and average
    // the dominant frequencies that fall inside it.
    const int band = out.occupancy.most_occupied_band();
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (out.occupancy.band_per_record[i] == band) {
        out.reference.per_record_hz.push_back(out.occupancy.dominant_hz[i]);
        out.reference.used_records.push_back(i);
      }
    }
    double sum = 0.0;
    for (double f : out.reference.per_record_hz) sum += f;
    out.reference.mean_hz = sum / static_cast<double>(out.reference.per_record_hz.size());
    const auto [lo, hi] = std::minmax_element(out.reference.per_record_hz.begin(),
                                              out.reference.per_record_hz.end());
    out.reference.spread_hz = *hi - *lo;
    out.reference_source = "records";
    out.notes.push_back("reference frequency taken from the most occupied band of the records");
  }
  for (const auto& w : out.reference.warnings) out.notes.push_back(w);
  for (const auto& w : out.occupancy.warnings) out.notes.push_back(w);

  out.band = select_band(records.front(), config.hwpt_level, out.reference.mean_hz);

  out.per_record_rms.resize(records.size());
  out.per_record_t_s.resize(records.size());
  parallel_for(records.size(), config.threads, [&](std::size_t i) {
    out.per_record_rms[i] = rms(extract_fiv(records[i], out.band.level, out.band.band_index));
    out.per_record_t_s[i] = *records[i].t_capture();
  });
  out.rms_series = aggregate_windows(out.per_record_t_s, out.per_record_rms, config.rms_window_s);

  if (inputs.friction) {
    out.friction_fit = fit_friction_trend(*inputs.friction);
    out.segmentation = segment_stages(*out.friction_fit, *inputs.friction,
                                      config.slope_threshold_per_min);
  } else {
    out.segmentation = segment_stages_from_rms(out.rms_series, config.settle_fraction);
    out.notes.push_back("no friction trace: stages derived from the RMS trend only");
  }
  for (const auto& f : out.segmentation.flags) {
    if (f == "rms_only_segmentation") continue;
    out.flags.push_back(f);
  }

  out.trends = classify_rms_trend(out.rms_series, out.segmentation, config.trend_z);
  for (const auto& st : out.trends.stages) {
    if (st.label == TrendLabel::kInsufficientData) {
      out.flags.push_back("insufficient_data:" + to_string(st.interval.stage));
    }
  }

  if (inputs.lubrication) {
    out.lubrication = lubrication_report(inputs.lubrication->contact, inputs.lubrication->roughness,
                                         inputs.lubrication->h_min_override_m);
  }
  out.mean_spectrum = mean_power_spectrum(records, config.psd);
  return out;
}

json reference_to_json(const ReferenceFrequency& ref) {
  return json{{"mean_hz", ref.mean_hz},
              {"per_record_hz", ref.per_record_hz},
              {"spread_hz", ref.spread_hz},
              {"warnings", ref.warnings}};
}

json band_to_json(const BandSelection& band) {
  return json{{"level", band.level},
              {"band_index", band.band_index},
              {"range_hz", {band.range.lo_hz, band.range.hi_hz}},
              {"band_count", 1 << band.level}};
}

json lubrication_to_json(const LubricationReport& r) {
  return json{{"sigma_c_um", r.sigma_c_um},
              {"sigma_c_m", r.sigma_c_um * 1e-6},
              {"r_composite_m", r.r_composite_m},
              {"e_composite_pa", r.e_composite_pa},
              {"h_min_m", r.h_min_m},
              {"h_min_nm", r.h_min_m * 1e9},
              {"h_min_formula_m", r.h_min_formula_m},
              {"h_min_overridden", r.h_min_overridden},
              {"lambda", r.lambda_ratio},
              {"regime", to_string(r.regime)},
              {"regime_rule", "boundary: lambda < 1; mixed: 1 <= lambda <= 3; fluid: lambda > 3"},
              {"hertz",
               {{"contact_radius_m", r.hertz.contact_radius_m},
                {"max_pressure_pa", r.hertz.max_pressure_pa},
                {"mean_pressure_pa", r.hertz.mean_pressure_pa}}}};
}

namespace {

json provenance_to_json(const Provenance& p, const PipelineConfig& config) {
  json inputs = json::array();
  for (const auto& d : p.inputs) inputs.push_back({{"name", d.name}, {"sha256", d.sha256}});
  return json{{"tool", "fivmon"},
              {"tool_version", p.tool_version},
              {"generated_at", p.generated_at},
              {"config", config_to_json(config)},
              {"inputs", inputs}};
}

}  // namespace

json identify_to_json(const IdentifyReport& r, const PipelineConfig& config,
                      const Provenance& provenance) {
  json per_record = json::array();
  for (std::size_t i = 0; i < r.reference.per_record_hz.size(); ++i) {
    per_record.push_back({{"record", i < r.record_names.size() ? r.record_names[i] : ""},
                          {"dominant_hz", r.reference.per_record_hz[i]}});
  }
  return json{{"reference_frequency", reference_to_json(r.reference)},
              {"records", per_record},
              {"selected_band", band_to_json(r.band)},
              {"input_errors", r.errors},
              {"provenance", provenance_to_json(provenance, config)}};
}

json report_to_json(const AnalysisReport& r, const PipelineConfig& config,
                    const Provenance& provenance) {
  json series = {{"window_seconds", r.rms_series.window_seconds},
                 {"window_centers_s", r.rms_series.window_centers},
                 {"rms_values", r.rms_series.rms_values},
                 {"records_per_window", r.rms_series.records_per_window}};

  json stages = json::array();
  for (const auto& s : r.segmentation.stages) {
    stages.push_back({{"label", to_string(s.stage)}, {"start_min", s.start_min}, {"end_min", s.end_min}});
  }
  json segmentation = {{"boundary_minutes", r.segmentation.boundary_minutes},
                       {"stages", stages},
                       {"method_tag", r.segmentation.method_tag},
                       {"flags", r.segmentation.flags}};

  json trends = json::array();
  for (const auto& t : r.trends.stages) {
    trends.push_back({{"stage", to_string(t.interval.stage)},
                      {"trend", to_string(t.label)},
                      {"slope_per_min", t.slope_per_min},
                      {"slope_stderr", t.slope_stderr},
                      {"mean_rms", t.mean_rms},
                      {"n_points", t.n_points}});
  }

  json occupancy = json::object();
  for (std::size_t k = 0; k < r.occupancy.counts.size(); ++k) {
    if (r.occupancy.counts[k] > 0) occupancy[std::to_string(k)] = r.occupancy.counts[k];
  }

  json doc = {{"reference_frequency", reference_to_json(r.reference)},
              {"reference_source", r.reference_source},
              {"selected_band", band_to_json(r.band)},
              {"band_occupancy", {{"counts_by_band", occupancy},
                                  {"most_occupied_band", r.occupancy.most_occupied_band()}}},
              {"rms_series", series},
              {"stage_segmentation", segmentation},
              {"rms_trend", {{"stages", trends},
                             {"stage_mean_ratio", r.trends.stage_mean_ratio},
                             {"method_tag", r.trends.method_tag}}},
              {"flags", r.flags},
              {"notes", r.notes},
              {"provenance", provenance_to_json(provenance, config)}};
  if (r.friction_fit) {
    doc["friction_fit"] = {{"mu0", r.friction_fit->mu0},
                           {"mu_inf", r.friction_fit->mu_inf},
                           {"tau_min", r.friction_fit->tau},
                           {"rmse", r.friction_fit->rmse},
                           {"no_decay", r.friction_fit->no_decay},
                           {"model", "mu_inf + (mu0 - mu_inf) * exp(-(t - t0) / tau)"}};
  } else {
    doc["friction_fit"] = nullptr;
  }
  doc["lubrication"] = r.lubrication ? lubrication_to_json(*r.lubrication) : json(nullptr);
  return doc;
}

json scenario_to_json(const SynthScenario& sc) {
  const auto& r = sc.runin;
  json tones = json::array();
  for (const auto& t : r.machine_tones) tones.push_back({{"hz", t.frequency_hz}, {"amplitude", t.amplitude}});
  return json{{"duration_minutes", r.duration_minutes},
              {"record_interval_s", r.record_interval_s},
              {"record_samples", r.record_samples},
              {"sample_rate", r.sample_rate},
              {"machine_tones", tones},
              {"fiv_hz", r.fiv_hz},
              {"fiv_envelope", {{"A_inf", r.fiv_amplitude_inf}, {"tau_minutes", r.fiv_tau_minutes}}},
              {"noise_rms", r.noise_rms},
              {"friction", {{"mu0", r.friction.mu0},
                            {"mu_inf", r.friction.mu_inf},
                            {"tau_minutes", r.friction.tau_minutes},
                            {"cadence_minutes", r.friction_cadence_minutes},
                            {"noise_sd", r.friction_noise_sd}}},
              {"rng_seed", r.rng_seed},
              {"squeal", {{"freqs_hz", sc.squeal_freqs_hz}, {"snr_db", sc.squeal_snr_db}}}};
}

SynthScenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw InputError("scenario: expected a JSON object");
  SynthScenario sc;
  auto& r = sc.runin;
  auto check_keys = [](const json& obj, std::initializer_list<const char*> allowed, const char* where) {
    for (const auto& [key, value] : obj.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw InputError(std::string("scenario: unknown key '") + key + "' in " + where);
    }
  };
  try {
    check_keys(j,
               {"duration_minutes", "record_interval_s", "record_samples", "sample_rate",
                "machine_tones", "fiv_hz", "fiv_envelope", "noise_rms", "friction", "rng_seed",
                "squeal"},
               "scenario");
    r.duration_minutes = j.value("duration_minutes", r.duration_minutes);
    r.record_interval_s = j.value("record_interval_s", r.record_interval_s);
    r.record_samples = j.value("record_samples", r.record_samples);
    r.sample_rate = j.value("sample_rate", r.sample_rate);
    if (j.contains("machine_tones")) {
      r.machine_tones.clear();
      for (const auto& t : j.at("machine_tones")) {
        r.machine_tones.push_back({t.at("hz").get<double>(), t.at("amplitude").get<double>()});
      }
    }
    r.fiv_hz = j.value("fiv_hz", r.fiv_hz);
    if (j.contains("fiv_envelope")) {
      const auto& e = j.at("fiv_envelope");
      check_keys(e, {"A_inf", "tau_minutes"}, "fiv_envelope");
      r.fiv_amplitude_inf = e.value("A_inf", r.fiv_amplitude_inf);
      r.fiv_tau_minutes = e.value("tau_minutes", r.fiv_tau_minutes);
    }
    r.noise_rms = j.value("noise_rms", r.noise_rms);
    if (j.contains("friction")) {
      const auto& f = j.at("friction");
      check_keys(f, {"mu0", "mu_inf", "tau_minutes", "cadence_minutes", "noise_sd"}, "friction");
      r.friction.mu0 = f.value("mu0", r.friction.mu0);
      r.friction.mu_inf = f.value("mu_inf", r.friction.mu_inf);
      r.friction.tau_minutes = f.value("tau_minutes", r.friction.tau_minutes);
      r.friction_cadence_minutes = f.value("cadence_minutes", r.friction_cadence_minutes);
      r.friction_noise_sd = f.value("noise_sd", r.friction_noise_sd);
    }
    r.rng_seed = j.value("rng_seed", r.rng_seed);
    if (j.contains("squeal")) {
      const auto& q = j.at("squeal");
      check_keys(q, {"freqs_hz", "snr_db"}, "squeal");
      sc.squeal_freqs_hz = q.value("freqs_hz", sc.squeal_freqs_hz);
      sc.squeal_snr_db = q.value("snr_db", sc.squeal_snr_db);
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("scenario: ") + e.what());
  }
  r.validate();
  return sc;
}

}  // namespace fivmon
