#pragma once

#include <complex>
#include <vector>

namespace extlab {

// In-place iterative radix-2 FFT. n must be a power of two.
// sign = -1 computes sum_k a[k] e^{-2*pi*i*jk/n} (no normalization).
void fft_pow2(std::vector<std::complex<double>>& a, int sign);

bool is_pow2(std::size_t n);
std::size_t next_pow2(std::size_t n);

}  // namespace extlab
