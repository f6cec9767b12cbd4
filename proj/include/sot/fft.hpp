#pragma once

#include <complex>
#include <vector>

namespace sot {

// In-place radix-2 FFT; size must be a power of two.
void fft(std::vector<std::complex<double>>& a, bool inverse);

bool is_pow2(std::size_t n);

}  // namespace sot
