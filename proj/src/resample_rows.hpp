#pragma once

// Per-row resampling steps shared by the serial and OpenMP kernels.

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "oriq/kernels.hpp"

namespace oriq::kernels::detail {

inline void horizontal_row(const std::uint8_t* src, const AxisTable& tx, double* dst) {
    if (tx.identity) {
        for (int i = 0; i < tx.out_size; ++i) dst[i] = src[i];
        return;
    }
    const std::size_t taps = std::size_t(tx.taps);
    for (int i = 0; i < tx.out_size; ++i) {
        const int* idx = tx.index.data() + std::size_t(i) * taps;
        const double* w = tx.weight.data() + std::size_t(i) * taps;
        double acc = 0.0;
        for (std::size_t k = 0; k < taps; ++k) acc += w[k] * src[idx[k]];
        dst[i] = acc;
    }
}

inline std::uint8_t to_sample(double v) {
    if (v <= 0.0) return 0;
    if (v >= 255.0) return 255;
    return static_cast<std::uint8_t>(std::floor(v + 0.5));
}

// Output row j of the vertical pass over an intermediate of width `w`.
inline void vertical_row(const double* tmp, std::size_t w, const AxisTable& ty, int j, std::uint8_t* dst) {
    if (ty.identity) {
        const double* row = tmp + std::size_t(j) * w;
        for (std::size_t x = 0; x < w; ++x) dst[x] = to_sample(row[x]);
        return;
    }
    const std::size_t taps = std::size_t(ty.taps);
    const int* idx = ty.index.data() + std::size_t(j) * taps;
    const double* wt = ty.weight.data() + std::size_t(j) * taps;
    for (std::size_t x = 0; x < w; ++x) {
        double acc = 0.0;
        for (std::size_t k = 0; k < taps; ++k) acc += wt[k] * tmp[std::size_t(idx[k]) * w + x];
        dst[x] = to_sample(acc);
    }
}

}  // namespace oriq::kernels::detail
