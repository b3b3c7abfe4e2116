#include "fivmon/hwpt.hpp"

#include <cmath>
#include <numbers>

#include "fivmon/error.hpp"
#include "fivmon/fft.hpp"

namespace fivmon {

namespace {

using cplx = std::complex<double>;

// Weight of bin j of the padded DFT inside a band coefficient vector.
double bin_weight(std::size_t j) { return j == 0 ? 1.0 : std::numbers::sqrt2; }

double coefficient_scale(const HwptPlan& plan) {
  return std::sqrt(static_cast<double>(plan.bins_per_band()) /
                   (static_cast<double>(plan.n_padded) * static_cast<double>(plan.n_samples)));
}

void check_band_index(const HwptPlan& plan, int band_index, const char* who) {
  if (band_index < 0 || static_cast<std::size_t>(band_index) >= plan.band_count()) {
    throw InputError(std::string(who) + ": band index " + std::to_string(band_index) +
                     " out of range [0, " + std::to_string(plan.band_count()) + ")");
  }
}

}  // namespace

HwptPlan make_hwpt_plan(std::size_t n_samples, double sample_rate, int level) {
  if (level < 1) throw InputError("hwpt: level must be >= 1");
  if (level > 30) throw InputError("hwpt: band narrower than one bin");
  if (!(sample_rate > 0.0 && std::isfinite(sample_rate))) {
    throw InputError("hwpt: sample_rate must be positive");
  }
  const std::size_t block = std::size_t{2} << level;  // 2^(L+1)
  if (block > n_samples) throw InputError("hwpt: band narrower than one bin");
  HwptPlan plan;
  plan.level = level;
  plan.n_samples = n_samples;
  plan.n_padded = (n_samples + block - 1) / block * block;
  plan.sample_rate = sample_rate;
  return plan;
}

double BandDecomposition::band_energy(std::size_t band_index) const {
  if (band_index >= coefficients.size()) throw InputError("band_energy: band index out of range");
  double e = 0.0;
  for (const auto& c : coefficients[band_index]) e += std::norm(c);
  if (band_index + 1 == coefficients.size()) e += nyquist_coefficient * nyquist_coefficient;
  return e;
}

std::vector<double> BandDecomposition::band_energies() const {
  std::vector<double> out(coefficients.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = band_energy(k);
  return out;
}

BandDecomposition hwpt_decompose(const TimeSeriesRecord& record, int level) {
  BandDecomposition out;
  out.plan = make_hwpt_plan(record.size(), record.sample_rate(), level);
  out.source_energy = mean_square(record.samples());
  out.t_capture = record.t_capture();
  out.channel_label = record.channel_label();
  out.unit = record.unit();

  const HwptPlan& plan = out.plan;
  std::vector<double> padded(plan.n_padded, 0.0);
  std::copy(record.samples().begin(), record.samples().end(), padded.begin());
  const auto spectrum = fft::forward_real(padded);

  const std::size_t m_bins = plan.bins_per_band();
  const double scale = coefficient_scale(plan);
  out.coefficients.resize(plan.band_count());
  std::vector<cplx> band(m_bins);
  for (std::size_t k = 0; k < plan.band_count(); ++k) {
    for (std::size_t m = 0; m < m_bins; ++m) {
      const std::size_t j = k * m_bins + m;
      band[m] = spectrum[j] * bin_weight(j);
    }
    auto coeffs = fft::inverse(band);
    for (auto& c : coeffs) c *= scale;
    out.coefficients[k] = std::move(coeffs);
  }
  out.nyquist_coefficient =
      spectrum[plan.n_padded / 2].real() /
      std::sqrt(static_cast<double>(plan.n_padded) * static_cast<double>(plan.n_samples));
  return out;
}

FrequencyRange band_frequency_range(const HwptPlan& plan, int band_index) {
  check_band_index(plan, band_index, "band_frequency_range");
  const double bw = plan.band_width_hz();
  return {band_index * bw, (band_index + 1) * bw};
}

int select_band_for_frequency(const HwptPlan& plan, double target_hz) {
  const double nyquist = plan.sample_rate / 2.0;
  if (!(target_hz >= 0.0 && target_hz < nyquist)) {
    throw InputError("select_band_for_frequency: target " + std::to_string(target_hz) +
                     " Hz outside [0, Nyquist)");
  }
  const auto k = static_cast<std::size_t>(std::floor(target_hz / plan.band_width_hz()));
  return static_cast<int>(std::min(k, plan.band_count() - 1));
}

TimeSeriesRecord reconstruct_band(const BandDecomposition& decomposition, int band_index) {
  const HwptPlan& plan = decomposition.plan;
  check_band_index(plan, band_index, "reconstruct_band");
  const auto k = static_cast<std::size_t>(band_index);
  const std::size_t m_bins = plan.bins_per_band();
  const std::size_t n_pad = plan.n_padded;

  const auto weighted = fft::forward(decomposition.coefficients[k]);
  const double scale = coefficient_scale(plan);

  std::vector<cplx> full(n_pad, cplx(0.0, 0.0));
  for (std::size_t m = 0; m < m_bins; ++m) {
    const std::size_t j = k * m_bins + m;
    const cplx bin = weighted[m] / (scale * bin_weight(j));
    full[j] = bin;
    if (j != 0) full[n_pad - j] = std::conj(bin);
  }
  if (k + 1 == plan.band_count()) {
    full[n_pad / 2] = cplx(decomposition.nyquist_coefficient *
                               std::sqrt(static_cast<double>(n_pad) *
                                         static_cast<double>(plan.n_samples)),
                           0.0);
  }

  const auto time = fft::inverse(full);
  std::vector<double> samples(plan.n_samples);
  for (std::size_t i = 0; i < plan.n_samples; ++i) samples[i] = time[i].real();

  TimeSeriesRecord out(std::move(samples), plan.sample_rate, decomposition.t_capture,
                       decomposition.channel_label, decomposition.unit);
  return out.with_band_tag({plan.level, band_index, band_frequency_range(plan, band_index)});
}

}  // namespace fivmon
