#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fivmon/error.hpp"
#include "fivmon/signal_core.hpp"
#include "oracles.hpp"

using namespace fivmon;
namespace orc = fivmon::oracle;

namespace {

constexpr std::size_t kN = 10240;

TimeSeriesRecord make_record(std::vector<double> x, double fs = orc::kFs) {
  return TimeSeriesRecord(std::move(x), fs, 0.0, "z");
}

std::vector<double> sum(std::vector<double> a, const std::vector<double>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

// Argmax scan over the spectrum within [lo, hi].
double argmax_frequency(const PowerSpectrum& s, double lo, double hi) {
  double best_f = -1.0;
  double best_p = -1.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.frequencies[i] < lo || s.frequencies[i] > hi) continue;
    if (s.power[i] > best_p) {
      best_p = s.power[i];
      best_f = s.frequencies[i];
    }
  }
  return best_f;
}

}  // namespace

TEST(TimeSeriesRecord, RejectsBadInput) {
  EXPECT_THROW(TimeSeriesRecord({}, 100.0), InputError);
  EXPECT_THROW(TimeSeriesRecord({1.0, 2.0}, 0.0), InputError);
  EXPECT_THROW(TimeSeriesRecord({1.0, NAN}, 100.0), InputError);
  EXPECT_THROW(TimeSeriesRecord({1.0, INFINITY}, 100.0), InputError);
}

TEST(TimeSeriesRecord, CopiesKeepMetadata) {
  TimeSeriesRecord r({1.0, -2.0, 3.0}, 50.0, 12.0, "x", "g");
  auto s = r.scaled(-2.0);
  EXPECT_EQ(s.samples(), (std::vector<double>{-2.0, 4.0, -6.0}));
  EXPECT_EQ(s.sample_rate(), 50.0);
  EXPECT_EQ(*s.t_capture(), 12.0);
  EXPECT_EQ(s.channel_label(), "x");
  EXPECT_EQ(s.unit(), "g");
  EXPECT_DOUBLE_EQ(r.duration(), 3.0 / 50.0);
}

TEST(PowerSpectrum, ZeroSignalHasZeroPower) {
  auto s = compute_power_spectrum(make_record(std::vector<double>(kN, 0.0)));
  for (double p : s.power) EXPECT_EQ(p, 0.0);
}

TEST(PowerSpectrum, GridAndInvariants) {
  auto s = compute_power_spectrum(make_record(orc::white_noise(kN, 3)));
  ASSERT_EQ(s.size(), 1025u);
  EXPECT_EQ(s.frequencies.front(), 0.0);
  EXPECT_NEAR(s.resolution_hz, orc::kFs / 2048.0, 1e-12);
  EXPECT_LE(s.frequencies.back(), orc::kFs / 2.0 + 1e-9);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GT(s.frequencies[i], s.frequencies[i - 1]);
  for (double p : s.power) {
    EXPECT_GE(p, 0.0);
    EXPECT_TRUE(std::isfinite(p));
  }
}

TEST(PowerSpectrum, ToneAt2332HzPeaksWithinOneBin) {
  auto s = compute_power_spectrum(make_record(orc::tone(kN, orc::kFs, 2332.0, 1.0)));
  EXPECT_NEAR(dominant_frequency(s, {0.0, orc::kFs / 2.0}), 2332.0, s.resolution_hz);
}

TEST(PowerSpectrum, IntegratesToWindowedMeanSquare) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto rec = make_record(orc::white_noise(kN, seed, 0.7));
    auto s = compute_power_spectrum(rec);
    EXPECT_NEAR(s.integrated_power() / windowed_mean_square(rec), 1.0, 1e-12);
  }
}

TEST(PowerSpectrum, SinusoidIntegratesToHalfSquaredAmplitude) {
  for (double a : {0.5, 1.0, 3.0}) {
    auto x = orc::tone(kN, orc::kFs, 1234.5, a, 0.3);
    auto s = compute_power_spectrum(make_record(x));
    // Direct mean square of the same sequence as the oracle.
    const double ms = orc::brute_rms(x) * orc::brute_rms(x);
    EXPECT_NEAR(s.integrated_power() / ms, 1.0, 0.02);
    EXPECT_NEAR(s.integrated_power() / (a * a / 2.0), 1.0, 0.02);
  }
}

TEST(PowerSpectrum, ParsevalOnNoiseWithinTwoPercent) {
  auto x = orc::white_noise(kN, 11, 2.0);
  auto s = compute_power_spectrum(make_record(x));
  const double ms = orc::brute_rms(x) * orc::brute_rms(x);
  EXPECT_NEAR(s.integrated_power() / ms, 1.0, 0.02);
}

TEST(PowerSpectrum, Errors) {
  EXPECT_THROW(compute_power_spectrum(make_record(std::vector<double>(100, 1.0))), InputError);
  try {
    compute_power_spectrum(make_record(std::vector<double>(100, 1.0)));
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("insufficient samples"), std::string::npos);
  }
  auto rec = make_record(orc::white_noise(kN, 1));
  EXPECT_THROW(compute_power_spectrum(rec, 2048, 1.0), InputError);
  EXPECT_THROW(compute_power_spectrum(rec, 2048, -0.1), InputError);
  EXPECT_THROW(compute_power_spectrum(rec, 1, 0.5), InputError);
}

TEST(Rms, ConstantSignal) {
  EXPECT_DOUBLE_EQ(rms(make_record(std::vector<double>(64, -3.5))), 3.5);
}

TEST(Rms, IntegerPeriodSinusoid) {
  // 40 full periods in 10240 samples.
  const double fs = 10240.0;
  auto x = orc::tone(kN, fs, 40.0, 2.5, 0.7);
  EXPECT_NEAR(rms(make_record(x, fs)) / (2.5 / std::sqrt(2.0)), 1.0, 1e-9);
}

TEST(Rms, MatchesBruteForce) {
  std::vector<double> x{0.3, -1.2, 4.4, 0.0, 2.2, -0.7, 1.9, -3.3, 0.01, 5.0};
  EXPECT_NEAR(rms(x), orc::brute_rms(x), 1e-15);
  EXPECT_NEAR(mean_square(x), orc::brute_rms(x) * orc::brute_rms(x), 1e-13);
}

TEST(Rms, AbsoluteHomogeneity) {
  auto x = orc::white_noise(1000, 5);
  const double base = rms(x);
  for (double alpha : {-7.0, -0.5, 0.001, 3.0, 1e6}) {
    std::vector<double> y(x);
    for (auto& v : y) v *= alpha;
    EXPECT_NEAR(rms(y) / (std::abs(alpha) * base), 1.0, 1e-12);
  }
}

TEST(Rms, EmptyThrows) {
  std::vector<double> empty;
  EXPECT_THROW(rms(std::span<const double>(empty)), InputError);
}

TEST(DetectPeaks, FlatSpectrumHasNoPeaks) {
  PowerSpectrum s;
  for (int i = 0; i < 100; ++i) {
    s.frequencies.push_back(10.0 * i);
    s.power.push_back(1.0);
  }
  s.resolution_hz = 10.0;
  EXPECT_TRUE(detect_peaks(s, 0.1, {0.0, 990.0}).empty());
}

TEST(DetectPeaks, SingleToneGivesOnePeak) {
  auto s = compute_power_spectrum(make_record(orc::tone(kN, orc::kFs, 2385.0, 1.0)));
  auto peaks = detect_peaks(s, 0.01, {1000.0, 5000.0});
  ASSERT_EQ(peaks.size(), 1u);
  EXPECT_NEAR(peaks[0].frequency, argmax_frequency(s, 1000.0, 5000.0), 1e-12);
  EXPECT_NEAR(peaks[0].frequency, 2385.0, s.resolution_hz);
  EXPECT_GE(peaks[0].power, peaks[0].prominence);
  EXPECT_GE(peaks[0].prominence, 0.0);
}

TEST(DetectPeaks, MachineHarmonicsAndSqueal) {
  auto x = sum(sum(orc::tone(kN, orc::kFs, 319.0, 1.0), orc::tone(kN, orc::kFs, 853.0, 0.8)),
               orc::tone(kN, orc::kFs, 2332.0, 0.6));
  auto s = compute_power_spectrum(make_record(x));
  auto peaks = detect_peaks(s, 0.05, {100.0, 12800.0});
  ASSERT_EQ(peaks.size(), 3u);
  std::vector<double> f;
  for (const auto& p : peaks) f.push_back(p.frequency);
  std::sort(f.begin(), f.end());
  EXPECT_NEAR(f[0], 319.0, s.resolution_hz);
  EXPECT_NEAR(f[1], 853.0, s.resolution_hz);
  EXPECT_NEAR(f[2], 2332.0, s.resolution_hz);
  // Descending power, frequencies on the grid.
  for (std::size_t i = 1; i < peaks.size(); ++i) EXPECT_GE(peaks[i - 1].power, peaks[i].power);
  for (const auto& p : peaks) {
    EXPECT_NE(std::find(s.frequencies.begin(), s.frequencies.end(), p.frequency), s.frequencies.end());
  }
}

TEST(DetectPeaks, EmptyRangeThrows) {
  auto s = compute_power_spectrum(make_record(orc::white_noise(kN, 1)));
  EXPECT_THROW(detect_peaks(s, 0.1, {3000.0, 2000.0}), InputError);
}

TEST(DominantFrequency, SquealTone) {
  auto s = compute_power_spectrum(make_record(orc::tone(kN, orc::kFs, 2325.0, 1.0)));
  EXPECT_NEAR(dominant_frequency(s, {1000.0, 5000.0}), 2325.0, s.resolution_hz);
}

TEST(DominantFrequency, TieGoesToLowerFrequency) {
  PowerSpectrum s;
  s.frequencies = {0.0, 1.0, 2.0, 3.0, 4.0};
  s.power = {0.0, 5.0, 1.0, 5.0, 0.0};
  s.resolution_hz = 1.0;
  EXPECT_EQ(dominant_frequency(s, {0.0, 4.0}), 1.0);
}

TEST(DominantFrequency, StrongerToneWins) {
  auto x = sum(orc::tone(kN, orc::kFs, 319.0, 0.4), orc::tone(kN, orc::kFs, 853.0, 1.0));
  auto s = compute_power_spectrum(make_record(x));
  const double f = dominant_frequency(s, {0.0, orc::kFs / 2.0});
  EXPECT_EQ(f, argmax_frequency(s, 0.0, orc::kFs / 2.0));
  EXPECT_NEAR(f, 853.0, s.resolution_hz);
}

TEST(DominantFrequency, ScaleInvariant) {
  auto s = compute_power_spectrum(make_record(orc::white_noise(kN, 9)));
  const double f = dominant_frequency(s, {500.0, 6000.0});
  for (double c : {1e-6, 0.3, 42.0}) {
    PowerSpectrum t = s;
    for (auto& p : t.power) p *= c;
    EXPECT_EQ(dominant_frequency(t, {500.0, 6000.0}), f);
  }
}

TEST(DominantFrequency, AllZeroThrows) {
  auto s = compute_power_spectrum(make_record(std::vector<double>(kN, 0.0)));
  EXPECT_THROW(dominant_frequency(s, {1000.0, 5000.0}), AnalysisError);
}
