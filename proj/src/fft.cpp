#include "maser/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

namespace maser::fft {

namespace {

// Twiddle table for size n: exp(-i*2*pi*j/n) for j < n/2.
// thread_local keeps transforms lock-free across sweep workers.
const std::vector<cplx>& twiddles(std::size_t n) {
    thread_local std::unordered_map<std::size_t, std::vector<cplx>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> w(n / 2);
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double a = step * static_cast<double>(j);
        w[j] = {std::cos(a), std::sin(a)};
    }
    return cache.emplace(n, std::move(w)).first->second;
}

void bit_reverse_permute(std::span<cplx> a) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
}

// sign = -1: forward kernel; sign = +1: inverse kernel (no 1/n).
void radix2(std::span<cplx> a, int sign) {
    const std::size_t n = a.size();
    if (n <= 1) return;
    bit_reverse_permute(a);
    const auto& w = twiddles(n);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t blk = 0; blk < n; blk += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx tw = w[j * stride];
                if (sign > 0) tw = std::conj(tw);
                const cplx u = a[blk + j];
                const cplx v = a[blk + j + len / 2] * tw;
                a[blk + j] = u + v;
                a[blk + j + len / 2] = u - v;
            }
        }
    }
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// Bluestein chirp-z: arbitrary-length DFT via three power-of-two FFTs.
void bluestein(std::span<cplx> a, int sign) {
    const std::size_t n = a.size();
    const std::size_t m = next_pow2(2 * n - 1);
    const double pi_n = std::numbers::pi / static_cast<double>(n);

    std::vector<cplx> chirp(n);
    for (std::size_t j = 0; j < n; ++j) {
        // phase j^2 mod 2n avoids precision loss for large j
        const auto j2 = static_cast<double>((j * j) % (2 * n));
        const double ang = pi_n * j2 * static_cast<double>(sign);
        chirp[j] = {std::cos(ang), std::sin(ang)};
    }

    std::vector<cplx> x(m, cplx{0.0, 0.0});
    std::vector<cplx> y(m, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) x[j] = a[j] * chirp[j];
    y[0] = std::conj(chirp[0]);
    for (std::size_t j = 1; j < n; ++j) {
        y[j] = std::conj(chirp[j]);
        y[m - j] = std::conj(chirp[j]);
    }

    radix2(x, -1);
    radix2(y, -1);
    for (std::size_t j = 0; j < m; ++j) x[j] *= y[j];
    radix2(x, +1);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t j = 0; j < n; ++j) a[j] = x[j] * inv_m * chirp[j];
}

void transform(std::span<cplx> a, int sign) {
    if (is_pow2(a.size()))
        radix2(a, sign);
    else
        bluestein(a, sign);
}

}  // namespace

void forward(std::span<cplx> data) { transform(data, -1); }

void inverse(std::span<cplx> data) {
    transform(data, +1);
    const double inv_n = 1.0 / static_cast<double>(data.size());
    for (auto& v : data) v *= inv_n;
}

std::vector<double> wavenumbers(std::size_t n) {
    std::vector<double> k(n);
    for (std::size_t j = 0; j < n; ++j)
        k[j] = static_cast<double>(wavenumber(j, n));
    return k;
}

}  // namespace maser::fft
