#pragma once

#include <complex>

namespace roughpde::detail {

// In-place unnormalized d-dimensional c2c transform of an n^d row-major block.
// sign = -1 is the forward direction.
void fft_inplace(std::complex<double>* data, int d, int n, int sign);

}  // namespace roughpde::detail
