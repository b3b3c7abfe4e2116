#pragma once

#include <cstdint>
#include <vector>

#include "fivmon/signal_core.hpp"
#include "fivmon/wear_stage.hpp"

namespace fivmon {

struct Tone {
  double frequency_hz = 0.0;
  double amplitude = 0.0;
};

struct FrictionModel {
  double mu0 = 0.129;
  double mu_inf = 0.103;
  double tau_minutes = 10.0;
};

// Ground-truth lubricated running-in experiment. Defaults follow the
// reference test rig: 6 s record cadence for 60 min, 10240 samples at a
// 0.039 ms sampling interval, machine harmonics at 319 / 853 Hz and a
// periodic FIV tone at 2385 Hz whose amplitude settles as
// A(t) = A_inf * (1 - exp(-t / tau)).
struct RuninScenario {
  double duration_minutes = 60.0;
  double record_interval_s = 6.0;
  std::size_t record_samples = 10240;
  double sample_rate = 25641.03;
  std::vector<Tone> machine_tones{{319.0, 1.0}, {853.0, 0.6}};
  double fiv_hz = 2385.0;
  double fiv_amplitude_inf = 0.2;
  double fiv_tau_minutes = 6.0;
  double noise_rms = 0.3;
  FrictionModel friction;
  double friction_cadence_minutes = 0.1;
  double friction_noise_sd = 0.0005;
  std::uint64_t rng_seed = 20220501;

  void validate() const;
  double fiv_amplitude_at(double t_seconds) const;
};

struct EnvelopePoint {
  double t_capture_s = 0.0;
  double fiv_amplitude = 0.0;
};

struct RuninDataset {
  std::vector<TimeSeriesRecord> records;
  std::vector<EnvelopePoint> envelope;  // one per record
};

RuninDataset generate_runin_records(const RuninScenario& scenario);

// One tone-dominated record per frequency with white noise at snr_db relative
// to the tone power (infinite snr_db means no noise).
std::vector<TimeSeriesRecord> generate_squeal_records(const std::vector<double>& freqs_hz,
                                                      double sample_rate,
                                                      std::size_t record_samples, double snr_db,
                                                      std::uint64_t seed = 1,
                                                      double amplitude = 1.0);

// Exponential-decay friction coefficient sampled every cadence_minutes over
// [0, duration_minutes] with additive Gaussian noise.
FrictionTrace generate_friction_trace(const FrictionModel& model, double duration_minutes,
                                      double cadence_minutes, double noise_sd,
                                      std::uint64_t seed = 1);

// Squeal reference frequencies (Hz) of the dry squeal runs.
inline const std::vector<double> kReferenceSquealFrequencies{2325.0, 2412.0, 2381.0, 2384.0,
                                                             2425.0};

}  // namespace fivmon
