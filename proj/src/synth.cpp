#include "fivmon/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "fivmon/error.hpp"

namespace fivmon {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Independent stream per (seed, purpose, index) so records can be generated
// in any order.
std::mt19937_64 stream_for(std::uint64_t seed, std::uint32_t purpose, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    purpose, static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

enum Purpose : std::uint32_t { kPhases = 1, kRecordNoise = 2, kSqueal = 3, kFriction = 4 };

}  // namespace

void RuninScenario::validate() const {
  auto fail = [](const std::string& m) { throw InputError("scenario: " + m); };
  if (!(duration_minutes > 0.0 && std::isfinite(duration_minutes))) fail("duration must be > 0");
  if (!(record_interval_s > 0.0 && std::isfinite(record_interval_s))) {
    fail("record_interval_s must be > 0");
  }
  if (record_samples < 2) fail("record_samples must be >= 2");
  if (!(sample_rate > 0.0 && std::isfinite(sample_rate))) fail("sample_rate must be > 0");
  const double nyquist = sample_rate / 2.0;
  for (const auto& t : machine_tones) {
    if (!(t.amplitude >= 0.0)) fail("tone amplitudes must be >= 0");
    if (!(t.frequency_hz >= 0.0 && t.frequency_hz < nyquist)) fail("tone above Nyquist");
  }
  if (!(fiv_hz > 0.0 && fiv_hz < nyquist)) fail("fiv_hz must be below Nyquist");
  if (!(fiv_amplitude_inf >= 0.0)) fail("fiv amplitude must be >= 0");
  if (!(fiv_tau_minutes > 0.0)) fail("fiv_tau_minutes must be > 0");
  if (!(noise_rms >= 0.0)) fail("noise_rms must be >= 0");
  if (!(friction.tau_minutes > 0.0)) fail("friction tau must be > 0");
  if (!(friction.mu0 > 0.0 && friction.mu_inf > 0.0)) fail("friction levels must be > 0");
  if (!(friction_cadence_minutes > 0.0)) fail("friction cadence must be > 0");
  if (!(friction_noise_sd >= 0.0)) fail("friction noise must be >= 0");
}

double RuninScenario::fiv_amplitude_at(double t_seconds) const {
  return fiv_amplitude_inf * (1.0 - std::exp(-(t_seconds / 60.0) / fiv_tau_minutes));
}

RuninDataset generate_runin_records(const RuninScenario& scenario) {
  scenario.validate();
  const double total_s = scenario.duration_minutes * 60.0;
  const auto n_records =
      static_cast<std::size_t>(std::ceil(total_s / scenario.record_interval_s - 1e-9));

  auto phase_rng = stream_for(scenario.rng_seed, kPhases, 0);
  std::uniform_real_distribution<double> uniform_phase(0.0, kTwoPi);
  std::vector<double> machine_phase;
  for (std::size_t i = 0; i < scenario.machine_tones.size(); ++i) {
    machine_phase.push_back(uniform_phase(phase_rng));
  }
  const double fiv_phase = uniform_phase(phase_rng);

  RuninDataset out;
  out.records.reserve(n_records);
  out.envelope.reserve(n_records);
  const double dt = 1.0 / scenario.sample_rate;
  for (std::size_t r = 0; r < n_records; ++r) {
    const double t0 = static_cast<double>(r) * scenario.record_interval_s;
    const double amp = scenario.fiv_amplitude_at(t0);
    auto rng = stream_for(scenario.rng_seed, kRecordNoise, r);
    std::normal_distribution<double> noise(0.0, 1.0);

    std::vector<double> x(scenario.record_samples);
    for (std::size_t n = 0; n < x.size(); ++n) {
      const double t = t0 + static_cast<double>(n) * dt;
      double v = amp * std::sin(kTwoPi * scenario.fiv_hz * t + fiv_phase);
      for (std::size_t k = 0; k < scenario.machine_tones.size(); ++k) {
        const auto& tone = scenario.machine_tones[k];
        v += tone.amplitude * std::sin(kTwoPi * tone.frequency_hz * t + machine_phase[k]);
      }
      if (scenario.noise_rms > 0.0) v += scenario.noise_rms * noise(rng);
      x[n] = v;
    }
    out.records.emplace_back(std::move(x), scenario.sample_rate, t0, "z");
    out.envelope.push_back({t0, amp});
  }
  return out;
}

std::vector<TimeSeriesRecord> generate_squeal_records(const std::vector<double>& freqs_hz,
                                                      double sample_rate,
                                                      std::size_t record_samples, double snr_db,
                                                      std::uint64_t seed, double amplitude) {
  if (!(sample_rate > 0.0)) throw InputError("squeal: sample_rate must be positive");
  if (record_samples < 2) throw InputError("squeal: record_samples must be >= 2");
  if (std::isnan(snr_db)) throw InputError("squeal: snr_db is NaN");
  std::vector<TimeSeriesRecord> out;
  for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
    const double f = freqs_hz[i];
    if (!(f > 0.0 && f < sample_rate / 2.0)) {
      throw InputError("squeal: frequency " + std::to_string(f) + " Hz violates Nyquist");
    }
    auto rng = stream_for(seed, kSqueal, i);
    const double phase = std::uniform_real_distribution<double>(0.0, kTwoPi)(rng);
    const double noise_sd =
        std::isinf(snr_db) && snr_db > 0.0
            ? 0.0
            : std::sqrt(amplitude * amplitude / 2.0 / std::pow(10.0, snr_db / 10.0));
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> x(record_samples);
    for (std::size_t n = 0; n < record_samples; ++n) {
      x[n] = amplitude * std::sin(kTwoPi * f * static_cast<double>(n) / sample_rate + phase);
      if (noise_sd > 0.0) x[n] += noise_sd * noise(rng);
    }
    out.emplace_back(std::move(x), sample_rate, static_cast<double>(i), "squeal");
  }
  return out;
}

FrictionTrace generate_friction_trace(const FrictionModel& model, double duration_minutes,
                                      double cadence_minutes, double noise_sd,
                                      std::uint64_t seed) {
  if (!(duration_minutes > 0.0 && cadence_minutes > 0.0)) {
    throw InputError("friction trace: duration and cadence must be positive");
  }
  if (!(model.tau_minutes > 0.0)) throw InputError("friction trace: tau must be positive");
  auto rng = stream_for(seed, kFriction, 0);
  std::normal_distribution<double> noise(0.0, 1.0);
  const auto n = static_cast<std::size_t>(std::floor(duration_minutes / cadence_minutes + 1e-9)) + 1;
  std::vector<double> t(n);
  std::vector<double> mu(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = static_cast<double>(i) * cadence_minutes;
    mu[i] = model.mu_inf + (model.mu0 - model.mu_inf) * std::exp(-t[i] / model.tau_minutes);
    if (noise_sd > 0.0) mu[i] += noise_sd * noise(rng);
  }
  return FrictionTrace(std::move(t), std::move(mu));
}

}  // namespace fivmon
