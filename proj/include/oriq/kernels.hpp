#pragma once

// Data-parallel inner loops. Every kernel exists twice with identical
// signatures: `serial` is the straightforward reference used by the tests,
// `omp` is the OpenMP version used by the library. Integer kernels agree
// bit-for-bit; floating kernels in `omp` reduce over fixed-size blocks in
// block order, so their output does not depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "oriq/sphere_geom.hpp"
#include "oriq/yuv_io.hpp"

namespace oriq::kernels {

/// Points per block for blocked floating-point reductions.
inline constexpr std::size_t kReduceBlock = 4096;

/// Contribution table for one resampling axis.
struct AxisTable {
    int in_size = 0;
    int out_size = 0;
    bool identity = false;
    int taps = 0;                 // taps per output sample
    std::vector<int> index;       // out_size * taps source indices (clamped)
    std::vector<double> weight;   // out_size * taps, each row sums to 1
};

AxisTable build_axis_table(int in_size, int out_size, ResampleFilter filter);

/// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double v) {
        const double t = sum + v;
        if ((sum >= 0 ? sum : -sum) >= (v >= 0 ? v : -v)) comp += (sum - t) + v;
        else comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

#define ORIQ_KERNEL_DECLS                                                                          \
    std::uint64_t sse(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);          \
    void row_sse(const Plane& a, const Plane& b, std::span<std::uint64_t> out);                    \
    std::uint64_t gather_sse(std::span<const std::uint8_t> a, std::span<const std::uint32_t> ia,  \
                             std::span<const std::uint8_t> b, std::span<const std::uint32_t> ib); \
    double bicubic_sse(const Plane& a, std::span<const PixelPos> pa, const Plane& b,              \
                       std::span<const PixelPos> pb);                                              \
    Plane resample(const Plane& in, const AxisTable& tx, const AxisTable& ty);

namespace serial {
ORIQ_KERNEL_DECLS
}  // namespace serial

namespace omp {
ORIQ_KERNEL_DECLS
}  // namespace omp

#undef ORIQ_KERNEL_DECLS

}  // namespace oriq::kernels
