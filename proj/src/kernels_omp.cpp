#include <algorithm>
#include <vector>

#include "oriq/error.hpp"
#include "oriq/kernels.hpp"
#include "resample_rows.hpp"

namespace oriq::kernels::omp {

std::uint64_t sse(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) throw InvalidArgument("sse: size mismatch");
    const std::ptrdiff_t n = std::ptrdiff_t(a.size());
    const std::uint8_t* pa = a.data();
    const std::uint8_t* pb = b.data();
    std::uint64_t acc = 0;
#pragma omp parallel for reduction(+ : acc) schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::int64_t d = std::int64_t(pa[i]) - std::int64_t(pb[i]);
        acc += std::uint64_t(d * d);
    }
    return acc;
}

void row_sse(const Plane& a, const Plane& b, std::span<std::uint64_t> out) {
    const std::size_t w = std::size_t(a.width);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < a.height; ++j) {
        const std::uint8_t* ra = a.samples.data() + std::size_t(j) * w;
        const std::uint8_t* rb = b.samples.data() + std::size_t(j) * w;
        std::uint64_t acc = 0;
        for (std::size_t x = 0; x < w; ++x) {
            const std::int64_t d = std::int64_t(ra[x]) - std::int64_t(rb[x]);
            acc += std::uint64_t(d * d);
        }
        out[std::size_t(j)] = acc;
    }
}

std::uint64_t gather_sse(std::span<const std::uint8_t> a, std::span<const std::uint32_t> ia,
                         std::span<const std::uint8_t> b, std::span<const std::uint32_t> ib) {
    const std::ptrdiff_t n = std::ptrdiff_t(ia.size());
    std::uint64_t acc = 0;
#pragma omp parallel for reduction(+ : acc) schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
        const std::int64_t d = std::int64_t(a[ia[std::size_t(k)]]) - std::int64_t(b[ib[std::size_t(k)]]);
        acc += std::uint64_t(d * d);
    }
    return acc;
}

double bicubic_sse(const Plane& a, std::span<const PixelPos> pa, const Plane& b, std::span<const PixelPos> pb) {
    const std::size_t n = pa.size();
    const std::ptrdiff_t blocks = std::ptrdiff_t((n + kReduceBlock - 1) / kReduceBlock);
    std::vector<double> partial(std::size_t(blocks), 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t blk = 0; blk < blocks; ++blk) {
        const std::size_t lo = std::size_t(blk) * kReduceBlock;
        const std::size_t hi = std::min(n, lo + kReduceBlock);
        CompensatedSum acc;
        for (std::size_t k = lo; k < hi; ++k) {
            const double d = sample_bicubic(a, pa[k].x, pa[k].y) - sample_bicubic(b, pb[k].x, pb[k].y);
            acc.add(d * d);
        }
        partial[std::size_t(blk)] = acc.value();
    }
    CompensatedSum total;
    for (double v : partial) total.add(v);
    return total.value();
}

Plane resample(const Plane& in, const AxisTable& tx, const AxisTable& ty) {
    if (tx.identity && ty.identity) return in;
    const std::size_t w = std::size_t(tx.out_size);
    std::vector<double> tmp(w * std::size_t(in.height));
#pragma omp parallel for schedule(static)
    for (int j = 0; j < in.height; ++j) {
        detail::horizontal_row(in.samples.data() + std::size_t(j) * std::size_t(in.width), tx, tmp.data() + std::size_t(j) * w);
    }
    Plane out(tx.out_size, ty.out_size);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ty.out_size; ++j) {
        detail::vertical_row(tmp.data(), w, ty, j, out.samples.data() + std::size_t(j) * w);
    }
    return out;
}

}  // namespace oriq::kernels::omp
