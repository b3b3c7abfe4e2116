#pragma once

#include <complex>
#include <span>
#include <vector>

namespace fivmon::fft {

using cplx = std::complex<double>;

// Unnormalized forward DFT: X[k] = sum_n x[n] exp(-2 pi i k n / N).
std::vector<cplx> forward(std::span<const cplx> x);
std::vector<cplx> forward_real(std::span<const double> x);

// Normalized inverse DFT: x[n] = (1/N) sum_k X[k] exp(+2 pi i k n / N).
std::vector<cplx> inverse(std::span<const cplx> spectrum);

}  // namespace fivmon::fft
