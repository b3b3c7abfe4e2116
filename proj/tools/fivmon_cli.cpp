// fivmon: batch front end for friction-induced vibration monitoring.
//
//   fivmon identify <squeal_dir>     reference FIV frequency and HWPT band
//   fivmon analyze <records_dir>     RMS series, wear stages, full report
//   fivmon lubrication <params>      film thickness ratio and regime
//   fivmon synth --out-dir <dir>     ground-truth synthetic data set
//   fivmon spectrum <record.csv>     Welch PSD export
//
// Exit codes: 0 success, 2 input error, 3 degenerate analysis (flags raised).

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fivmon/error.hpp"
#include "fivmon/pipeline.hpp"
#include "fivmon/record_io.hpp"
#include "fivmon/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx, digest, &len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

fivmon::InputDigest digest_of(const fs::path& path, const fs::path& base) {
  std::error_code ec;
  auto rel = fs::relative(path, base, ec);
  return {ec || rel.empty() ? path.filename().string() : rel.generic_string(),
          sha256_hex(fivmon::io::read_text_file(path))};
}

std::string utc_now_iso() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Flags shared by every analysis subcommand; applied on top of --config.
struct ConfigFlags {
  std::string config_file;
  std::string write_config;
  std::optional<int> level;
  std::optional<double> search_min;
  std::optional<double> search_max;
  std::optional<double> rms_window;
  std::optional<double> slope_threshold;
  std::optional<std::size_t> psd_segment;
  std::optional<double> psd_overlap;
  std::optional<std::string> channel;
  std::optional<double> trend_z;
  unsigned threads = 0;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "Pipeline config JSON");
    app->add_option("--write-config", write_config, "Write the effective config JSON to this file");
    app->add_option("--level", level, "HWPT level (bands = 2^level)");
    app->add_option("--search-min", search_min, "Squeal search range lower edge (Hz)");
    app->add_option("--search-max", search_max, "Squeal search range upper edge (Hz)");
    app->add_option("--rms-window", rms_window, "RMS aggregation window (s)");
    app->add_option("--slope-threshold", slope_threshold, "Stage boundary slope threshold (1/min)");
    app->add_option("--psd-segment", psd_segment, "Welch segment length (samples)");
    app->add_option("--psd-overlap", psd_overlap, "Welch overlap fraction [0, 1)");
    app->add_option("--channel", channel, "Column label or index in record files");
    app->add_option("--trend-z", trend_z, "Sigma multiplier for RMS trend labels");
    app->add_option("--threads", threads, "Worker threads (0 = all cores)");
  }

  fivmon::PipelineConfig resolve() const {
    fivmon::PipelineConfig c;
    if (!config_file.empty()) {
      try {
        c = fivmon::config_from_json(json::parse(fivmon::io::read_text_file(config_file)));
      } catch (const json::parse_error& e) {
        throw fivmon::InputError(config_file + ": " + e.what());
      }
    }
    if (level) c.hwpt_level = *level;
    if (search_min) c.squeal_search_range_hz.lo_hz = *search_min;
    if (search_max) c.squeal_search_range_hz.hi_hz = *search_max;
    if (rms_window) c.rms_window_s = *rms_window;
    if (slope_threshold) c.slope_threshold_per_min = *slope_threshold;
    if (psd_segment) c.psd.segment_length = *psd_segment;
    if (psd_overlap) c.psd.overlap_fraction = *psd_overlap;
    if (channel) c.channel = *channel;
    if (trend_z) c.trend_z = *trend_z;
    c.threads = threads;
    c.validate();
    if (!write_config.empty()) {
      fivmon::io::write_text_file(write_config, fivmon::config_to_json(c).dump(2) + "\n");
    }
    return c;
  }
};

void emit_json(const json& doc, const std::string& out_file) {
  const std::string text = doc.dump(2) + "\n";
  if (out_file.empty() || out_file == "-") {
    std::cout << text;
  } else {
    fivmon::io::write_text_file(out_file, text);
  }
}

int run_identify(const fs::path& squeal_dir, const std::string& out_file, const ConfigFlags& flags,
                 const std::string& clock) {
  const auto config = flags.resolve();
  auto loaded = fivmon::io::load_record_dir(squeal_dir, config.channel);
  for (const auto& e : loaded.errors) std::cerr << "warning: " << e << "\n";
  if (loaded.records.empty()) {
    throw fivmon::InputError("identify: no readable records in " + squeal_dir.string());
  }
  std::vector<std::string> names;
  fivmon::Provenance prov;
  prov.generated_at = clock.empty() ? utc_now_iso() : clock;
  for (const auto& src : loaded.sources) {
    names.push_back(src.filename().string());
    prov.inputs.push_back(digest_of(src, squeal_dir));
  }
  auto report = fivmon::identify(loaded.records, config, names);
  report.errors = loaded.errors;
  for (const auto& w : report.reference.warnings) std::cerr << "warning: " << w << "\n";

  std::cerr << "reference frequency: " << report.reference.mean_hz << " Hz from "
            << report.reference.per_record_hz.size() << " record(s); band "
            << report.band.band_index << " [" << report.band.range.lo_hz << ", "
            << report.band.range.hi_hz << ") Hz\n";
  emit_json(fivmon::identify_to_json(report, config, prov), out_file);
  return kExitOk;
}

struct AnalyzeArgs {
  std::string records_dir;
  std::string friction_csv;
  std::string squeal_dir;
  std::optional<double> reference_hz;
  std::string lubrication_params;
  std::string out_dir;
  std::string clock;
};

int run_analyze(const AnalyzeArgs& args, const ConfigFlags& flags) {
  const auto config = flags.resolve();
  fivmon::AnalysisInputs inputs;
  fivmon::Provenance prov;
  prov.generated_at = args.clock.empty() ? utc_now_iso() : args.clock;

  auto loaded = fivmon::io::load_record_dir(args.records_dir, config.channel);
  if (!loaded.errors.empty()) {
    for (const auto& e : loaded.errors) std::cerr << "error: " << e << "\n";
    throw fivmon::InputError("analyze: " + std::to_string(loaded.errors.size()) +
                             " unreadable record file(s)");
  }
  if (loaded.records.empty()) throw fivmon::InputError("analyze: no records in " + args.records_dir);
  inputs.records = std::move(loaded.records);
  const fs::path records_base = fs::path(args.records_dir).parent_path();
  for (const auto& src : loaded.sources) prov.inputs.push_back(digest_of(src, records_base));

  if (!args.friction_csv.empty()) {
    inputs.friction = fivmon::io::read_friction_csv(args.friction_csv);
    prov.inputs.push_back(digest_of(args.friction_csv, fs::path(args.friction_csv).parent_path()));
  }
  if (!args.squeal_dir.empty()) {
    auto squeal = fivmon::io::load_record_dir(args.squeal_dir, config.channel);
    for (const auto& e : squeal.errors) std::cerr << "warning: " << e << "\n";
    if (squeal.records.empty()) throw fivmon::InputError("analyze: no readable squeal records");
    inputs.squeal_records = std::move(squeal.records);
    const fs::path base = fs::path(args.squeal_dir).parent_path();
    for (const auto& src : squeal.sources) prov.inputs.push_back(digest_of(src, base));
  }
  inputs.reference_hz = args.reference_hz;
  if (!args.lubrication_params.empty()) {
    inputs.lubrication = fivmon::io::read_lubrication_params(args.lubrication_params);
    prov.inputs.push_back(
        digest_of(args.lubrication_params, fs::path(args.lubrication_params).parent_path()));
  }

  const auto report = fivmon::analyze(inputs, config);
  const json doc = fivmon::report_to_json(report, config, prov);

  if (args.out_dir.empty()) {
    emit_json(doc, "-");
  } else {
    fs::create_directories(args.out_dir);
    emit_json(doc, (fs::path(args.out_dir) / "report.json").string());
    fivmon::io::write_rms_series_csv(fs::path(args.out_dir) / "rms_series.csv", report.rms_series);
    fivmon::io::write_spectrum_csv(fs::path(args.out_dir) / "spectrum.csv", report.mean_spectrum);
  }

  std::cerr << "band " << report.band.band_index << " [" << report.band.range.lo_hz << ", "
            << report.band.range.hi_hz << ") Hz; boundary "
            << report.segmentation.boundary_minutes << " min;";
  for (const auto& st : report.trends.stages) {
    std::cerr << " " << fivmon::to_string(st.interval.stage) << "=" << fivmon::to_string(st.label);
  }
  std::cerr << "\n";
  for (const auto& f : report.flags) std::cerr << "flag: " << f << "\n";
  return report.flags.empty() ? kExitOk : kExitDegenerate;
}

int run_lubrication(const std::string& params_file, const std::string& out_file) {
  const auto params = fivmon::io::read_lubrication_params(params_file);
  const auto report =
      fivmon::lubrication_report(params.contact, params.roughness, params.h_min_override_m);
  json doc = fivmon::lubrication_to_json(report);
  if (params.stroke_m && params.rpm) {
    const auto v = fivmon::reciprocating_velocities(*params.stroke_m, *params.rpm);
    doc["velocities"] = {{"mean_sliding_m_s", v.mean_sliding_m_s},
                         {"entrainment_m_s", v.entrainment_m_s}};
  }
  std::cerr << "lambda = " << report.lambda_ratio << " (" << fivmon::to_string(report.regime)
            << " lubrication)\n";
  emit_json(doc, out_file);
  return kExitOk;
}

int run_synth(const std::string& scenario_file, const fs::path& out_dir,
              std::optional<std::uint64_t> seed) {
  fivmon::SynthScenario scenario;
  if (!scenario_file.empty()) {
    try {
      scenario = fivmon::scenario_from_json(json::parse(fivmon::io::read_text_file(scenario_file)));
    } catch (const json::parse_error& e) {
      throw fivmon::InputError(scenario_file + ": " + e.what());
    }
  }
  if (seed) scenario.runin.rng_seed = *seed;
  scenario.runin.validate();

  std::error_code ec;
  fs::create_directories(out_dir / "records", ec);
  fs::create_directories(out_dir / "squeal", ec);
  if (ec) throw fivmon::InputError("synth: cannot create " + out_dir.string() + ": " + ec.message());

  const auto& r = scenario.runin;
  const auto dataset = fivmon::generate_runin_records(r);
  json files = json::array();
  json envelope = json::array();
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "rec_%05zu.csv", i);
    const std::string text = fivmon::io::format_record_csv(dataset.records[i]);
    fivmon::io::write_text_file(out_dir / "records" / name, text);
    files.push_back({{"path", std::string("records/") + name}, {"sha256", sha256_hex(text)}});
    envelope.push_back({{"t_capture_s", dataset.envelope[i].t_capture_s},
                        {"fiv_amplitude", dataset.envelope[i].fiv_amplitude},
                        {"fiv_rms", dataset.envelope[i].fiv_amplitude / std::sqrt(2.0)}});
  }

  const auto squeal = fivmon::generate_squeal_records(scenario.squeal_freqs_hz, r.sample_rate,
                                                      r.record_samples, scenario.squeal_snr_db,
                                                      r.rng_seed);
  for (std::size_t i = 0; i < squeal.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "squeal_%02zu.csv", i);
    const std::string text = fivmon::io::format_record_csv(squeal[i]);
    fivmon::io::write_text_file(out_dir / "squeal" / name, text);
    files.push_back({{"path", std::string("squeal/") + name}, {"sha256", sha256_hex(text)}});
  }

  const auto trace = fivmon::generate_friction_trace(r.friction, r.duration_minutes,
                                                     r.friction_cadence_minutes,
                                                     r.friction_noise_sd, r.rng_seed);
  fivmon::io::write_friction_csv(out_dir / "friction.csv", trace);
  files.push_back({{"path", "friction.csv"},
                   {"sha256", sha256_hex(fivmon::io::read_text_file(out_dir / "friction.csv"))}});

  fivmon::io::LubricationParams lub;
  lub.contact = fivmon::reference_contact_spec();
  lub.roughness = {0.124, 0.547};
  lub.stroke_m = 5e-3;
  lub.rpm = 400.0;
  const std::string lub_text = fivmon::io::format_lubrication_params(lub);
  fivmon::io::write_text_file(out_dir / "lubrication.params", lub_text);
  files.push_back({{"path", "lubrication.params"}, {"sha256", sha256_hex(lub_text)}});

  const json manifest = {{"scenario", fivmon::scenario_to_json(scenario)},
                         {"ground_truth",
                          {{"fiv_hz", r.fiv_hz},
                           {"squeal_freqs_hz", scenario.squeal_freqs_hz},
                           {"friction", {{"mu0", r.friction.mu0},
                                         {"mu_inf", r.friction.mu_inf},
                                         {"tau_minutes", r.friction.tau_minutes}}},
                           {"envelope", envelope}}},
                         {"files", files},
                         {"tool_version", FIVMON_VERSION}};
  fivmon::io::write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
  std::cerr << "wrote " << dataset.records.size() << " records, " << squeal.size()
            << " squeal records and friction.csv to " << out_dir.string() << "\n";
  return kExitOk;
}

int run_spectrum(const std::string& record_file, const std::string& out_file,
                 const ConfigFlags& flags) {
  const auto config = flags.resolve();
  const auto record = fivmon::io::read_record_csv(record_file, config.channel);
  const auto spectrum = fivmon::compute_power_spectrum(record, config.psd);
  if (out_file.empty() || out_file == "-") {
    std::cout << "frequency_hz,power\n";
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
      std::cout << spectrum.frequencies[i] << "," << spectrum.power[i] << "\n";
    }
  } else {
    fivmon::io::write_spectrum_csv(out_file, spectrum);
  }
  const auto peaks = fivmon::detect_peaks(spectrum, 0.05, {0.0, record.sample_rate() / 2.0});
  for (std::size_t i = 0; i < std::min<std::size_t>(peaks.size(), 5); ++i) {
    std::cerr << "peak " << peaks[i].frequency << " Hz power " << peaks[i].power << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fivmon - friction-induced vibration monitoring"};
  app.require_subcommand(1);
  app.set_version_flag("--version", FIVMON_VERSION);

  ConfigFlags flags;

  auto* identify = app.add_subcommand("identify", "Identify the reference FIV frequency from squeal records");
  std::string squeal_dir;
  std::string identify_out;
  std::string identify_clock;
  identify->add_option("squeal_dir", squeal_dir, "Directory of squeal record CSVs")->required();
  identify->add_option("-o,--out", identify_out, "Output JSON (default stdout)");
  identify->add_option("--clock", identify_clock, "Timestamp written to provenance");
  flags.attach(identify);

  auto* analyze = app.add_subcommand("analyze", "Extract the FIV band, track its RMS, segment wear stages");
  AnalyzeArgs analyze_args;
  analyze->add_option("records_dir", analyze_args.records_dir, "Directory of running-in record CSVs")
      ->required();
  analyze->add_option("--friction", analyze_args.friction_csv, "Friction coefficient CSV (time_min,mu)");
  analyze->add_option("--squeal-dir", analyze_args.squeal_dir, "Squeal records for the reference frequency");
  analyze->add_option("--reference-hz", analyze_args.reference_hz, "Explicit reference frequency (Hz)");
  analyze->add_option("--lubrication", analyze_args.lubrication_params, "Lubrication parameter file");
  analyze->add_option("-o,--out-dir", analyze_args.out_dir,
                      "Write report.json, rms_series.csv, spectrum.csv here (default: JSON to stdout)");
  analyze->add_option("--clock", analyze_args.clock, "Timestamp written to provenance");
  flags.attach(analyze);

  auto* lubrication = app.add_subcommand("lubrication", "Film thickness ratio and lubrication regime");
  std::string params_file;
  std::string lubrication_out;
  lubrication->add_option("params_file", params_file, "key = value parameter file")->required();
  lubrication->add_option("-o,--out", lubrication_out, "Output JSON (default stdout)");

  auto* synth = app.add_subcommand("synth", "Write a synthetic running-in data set");
  std::string scenario_file;
  std::string synth_out;
  std::optional<std::uint64_t> seed;
  synth->add_option("--scenario", scenario_file, "Scenario JSON (defaults if omitted)");
  synth->add_option("-o,--out-dir", synth_out, "Output directory")->required();
  synth->add_option("--seed", seed, "Override rng_seed");

  auto* spectrum = app.add_subcommand("spectrum", "Export the Welch PSD of one record");
  std::string record_file;
  std::string spectrum_out;
  spectrum->add_option("record", record_file, "Record CSV")->required();
  spectrum->add_option("-o,--out", spectrum_out, "Output CSV (default stdout)");
  flags.attach(spectrum);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*identify) return run_identify(squeal_dir, identify_out, flags, identify_clock);
    if (*analyze) return run_analyze(analyze_args, flags);
    if (*lubrication) return run_lubrication(params_file, lubrication_out);
    if (*synth) return run_synth(scenario_file, synth_out, seed);
    if (*spectrum) return run_spectrum(record_file, spectrum_out, flags);
  } catch (const fivmon::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fivmon::AnalysisError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
