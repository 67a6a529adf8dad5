#pragma once

#include <cstddef>
#include <span>

#include "etsim/field.hpp"

namespace etsim::detail {

enum class FftSign { minus = -1, plus = +1 };

/// In-place centred DFT: out[k] = sum_j in[j] exp(sign * 2 pi i (k-n/2)(j-n/2)/n).
/// n must be a power of two >= 4. Unnormalized.
void centered_dft(std::span<Complex> data, FftSign sign);

/// Centred 2-D DFT of a row-major rows x cols array, same convention per axis.
void centered_dft_2d(std::span<Complex> data, std::size_t rows, std::size_t cols, FftSign sign);

}  // namespace etsim::detail
