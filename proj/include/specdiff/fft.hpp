#pragma once

#include <cstddef>
#include <vector>

#include "specdiff/test_function.hpp"

namespace specdiff {

// In-order complex DFTs, forward kernel e^{-2 pi i n k / N}. Deterministic
// for fixed input (serial FFTW with a heuristic plan). Any length works;
// powers of two are fastest.
std::vector<cplx> fft_forward(const std::vector<cplx>& in);
std::vector<cplx> fft_inverse(const std::vector<cplx>& in);  // includes 1/N

// smallest power of two >= n
std::size_t fft_pad_size(std::size_t n);

}  // namespace specdiff
