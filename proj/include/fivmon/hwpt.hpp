#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "fivmon/signal_core.hpp"

namespace fivmon {

// Harmonic wavelet packet transform.
//
// A level-L transform splits the positive-frequency half of the DFT of a
// (zero-padded) record into 2^L contiguous bands of M = N_pad / 2^(L+1) bins:
// band k owns bins [k*M, (k+1)*M). The DC bin therefore sits in band 0 and
// the Nyquist bin N_pad/2 is appended to the last band, so the bands tile
// [0, fs/2] with no gaps.
//
// Band coefficients are the length-M inverse DFT of the band's bins, with
// non-DC bins weighted by sqrt(2) (they stand for themselves and their
// conjugate mirror) and an overall factor sqrt(M / (N_pad * N)). With that
// normalisation sum_m |c_k[m]|^2 is the band's contribution to the mean
// square of the original N samples, and the band energies sum to it exactly.

struct HwptPlan {
  int level = 0;
  std::size_t n_samples = 0;  // original record length N
  std::size_t n_padded = 0;   // N rounded up to a multiple of 2^(L+1)
  double sample_rate = 0.0;

  std::size_t band_count() const { return std::size_t{1} << level; }
  std::size_t bins_per_band() const { return n_padded >> (level + 1); }
  double band_width_hz() const { return sample_rate / static_cast<double>(std::size_t{2} << level); }
  std::size_t padding() const { return n_padded - n_samples; }
};

// Validates level and sizes; throws InputError "band narrower than one bin"
// when 2^(L+1) > N.
HwptPlan make_hwpt_plan(std::size_t n_samples, double sample_rate, int level);

struct BandDecomposition {
  HwptPlan plan;
  std::vector<std::vector<std::complex<double>>> coefficients;  // [band][m], size M each
  // Nyquist bin of the padded DFT (real), carried by the last band.
  double nyquist_coefficient = 0.0;
  double source_energy = 0.0;  // mean square of the input record
  // Metadata needed to rebuild a record from a band.
  std::optional<double> t_capture;
  std::string channel_label;
  std::string unit;

  double band_energy(std::size_t band_index) const;
  std::vector<double> band_energies() const;
};

BandDecomposition hwpt_decompose(const TimeSeriesRecord& record, int level);

// Half-open [k * fs / 2^(L+1), (k+1) * fs / 2^(L+1)).
FrequencyRange band_frequency_range(const HwptPlan& plan, int band_index);

int select_band_for_frequency(const HwptPlan& plan, double target_hz);

// Real time-domain signal holding only band k (plus its conjugate mirror),
// padding stripped. Same length, rate and metadata as the decomposed record.
TimeSeriesRecord reconstruct_band(const BandDecomposition& decomposition, int band_index);

}  // namespace fivmon
