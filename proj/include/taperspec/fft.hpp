#pragma once

#include <complex>
#include <span>

namespace taperspec::fft {

/// In-place unnormalized forward DFT: X[q] = sum_m x[m] exp(-2 pi i q m / N).
void forward(std::span<std::complex<double>> data);

/// In-place unnormalized backward DFT (positive exponent).
void backward(std::span<std::complex<double>> data);

}  // namespace taperspec::fft
