#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace maser::fft {

using cplx = std::complex<double>;

[[nodiscard]] constexpr bool is_pow2(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
}

/// In-place forward DFT, X_k = sum_j x_j exp(-2*pi*i*j*k/n). Unnormalized.
/// Radix-2 for power-of-two sizes, Bluestein chirp-z otherwise.
void forward(std::span<cplx> data);

/// In-place inverse DFT including the 1/n factor; inverse(forward(x)) == x.
void inverse(std::span<cplx> data);

/// Integer wavenumber for FFT bin j of an n-point transform: j on the
/// positive half, j - n on the wrapped half, covering the symmetric band
/// [-n/2, n/2) (for even n the Nyquist bin maps negative).
[[nodiscard]] inline long wavenumber(std::size_t j, std::size_t n) {
    return j < (n + 1) / 2 ? static_cast<long>(j)
                           : static_cast<long>(j) - static_cast<long>(n);
}

/// All n integer wavenumbers in bin order.
[[nodiscard]] std::vector<double> wavenumbers(std::size_t n);

}  // namespace maser::fft
