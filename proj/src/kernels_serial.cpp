#include <vector>

#include "oriq/error.hpp"
#include "oriq/kernels.hpp"
#include "resample_rows.hpp"

namespace oriq::kernels::serial {

std::uint64_t sse(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    if (a.size() != b.size()) throw InvalidArgument("sse: size mismatch");
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::int64_t d = std::int64_t(a[i]) - std::int64_t(b[i]);
        acc += std::uint64_t(d * d);
    }
    return acc;
}

void row_sse(const Plane& a, const Plane& b, std::span<std::uint64_t> out) {
    const std::size_t w = std::size_t(a.width);
    for (int j = 0; j < a.height; ++j) {
        const std::size_t off = std::size_t(j) * w;
        out[std::size_t(j)] = sse(std::span(a.samples).subspan(off, w), std::span(b.samples).subspan(off, w));
    }
}

std::uint64_t gather_sse(std::span<const std::uint8_t> a, std::span<const std::uint32_t> ia,
                         std::span<const std::uint8_t> b, std::span<const std::uint32_t> ib) {
    std::uint64_t acc = 0;
    for (std::size_t k = 0; k < ia.size(); ++k) {
        const std::int64_t d = std::int64_t(a[ia[k]]) - std::int64_t(b[ib[k]]);
        acc += std::uint64_t(d * d);
    }
    return acc;
}

double bicubic_sse(const Plane& a, std::span<const PixelPos> pa, const Plane& b, std::span<const PixelPos> pb) {
    CompensatedSum acc;
    for (std::size_t k = 0; k < pa.size(); ++k) {
        const double d = sample_bicubic(a, pa[k].x, pa[k].y) - sample_bicubic(b, pb[k].x, pb[k].y);
        acc.add(d * d);
    }
    return acc.value();
}

Plane resample(const Plane& in, const AxisTable& tx, const AxisTable& ty) {
    if (tx.identity && ty.identity) return in;
    const std::size_t w = std::size_t(tx.out_size);
    std::vector<double> tmp(w * std::size_t(in.height));
    for (int j = 0; j < in.height; ++j) {
        detail::horizontal_row(in.samples.data() + std::size_t(j) * std::size_t(in.width), tx, tmp.data() + std::size_t(j) * w);
    }
    Plane out(tx.out_size, ty.out_size);
    for (int j = 0; j < ty.out_size; ++j) {
        detail::vertical_row(tmp.data(), w, ty, j, out.samples.data() + std::size_t(j) * w);
    }
    return out;
}

}  // namespace oriq::kernels::serial
