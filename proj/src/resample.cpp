#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "oriq/error.hpp"
#include "oriq/kernels.hpp"
#include "oriq/yuv_io.hpp"

namespace oriq {

namespace {

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

double lanczos3(double x) {
    const double ax = std::abs(x);
    return ax < 3.0 ? sinc(x) * sinc(x / 3.0) : 0.0;
}

double triangle(double x) {
    const double ax = std::abs(x);
    return ax < 1.0 ? 1.0 - ax : 0.0;
}

}  // namespace

std::string_view to_string(ResampleFilter f) {
    switch (f) {
        case ResampleFilter::Nearest: return "nearest";
        case ResampleFilter::Bilinear: return "bilinear";
        case ResampleFilter::Lanczos3: return "lanczos3";
    }
    return "?";
}

ResampleFilter parse_filter(std::string_view name) {
    if (name == "nearest") return ResampleFilter::Nearest;
    if (name == "bilinear") return ResampleFilter::Bilinear;
    if (name == "lanczos3" || name == "lanczos") return ResampleFilter::Lanczos3;
    throw InvalidArgument("unknown resampling filter '" + std::string(name) + "'");
}

namespace kernels {

AxisTable build_axis_table(int in_size, int out_size, ResampleFilter filter) {
    if (in_size < 1 || out_size < 1) throw InvalidArgument("resample sizes must be >= 1");
    AxisTable t;
    t.in_size = in_size;
    t.out_size = out_size;
    if (in_size == out_size) {
        t.identity = true;
        return t;
    }
    const double ratio = double(in_size) / double(out_size);

    if (filter == ResampleFilter::Nearest) {
        t.taps = 1;
        t.index.resize(std::size_t(out_size));
        t.weight.assign(std::size_t(out_size), 1.0);
        for (int i = 0; i < out_size; ++i) {
            const double src = (i + 0.5) * ratio - 0.5;
            t.index[std::size_t(i)] = clamp_index(static_cast<long long>(std::floor(src + 0.5)), in_size);
        }
        return t;
    }

    const double support = filter == ResampleFilter::Lanczos3 ? 3.0 : 1.0;
    const double scale = std::max(1.0, ratio);
    const double radius = support * scale;
    t.taps = int(std::ceil(radius)) * 2 + 1;
    t.index.assign(std::size_t(out_size) * std::size_t(t.taps), 0);
    t.weight.assign(std::size_t(out_size) * std::size_t(t.taps), 0.0);

    for (int i = 0; i < out_size; ++i) {
        const double src = (i + 0.5) * ratio - 0.5;
        const int first = int(std::floor(src - radius)) + 1;
        double total = 0.0;
        int* idx = t.index.data() + std::size_t(i) * std::size_t(t.taps);
        double* w = t.weight.data() + std::size_t(i) * std::size_t(t.taps);
        for (int k = 0; k < t.taps; ++k) {
            const int pos = first + k;
            const double d = (pos - src) / scale;
            const double v = filter == ResampleFilter::Lanczos3 ? lanczos3(d) : triangle(d);
            idx[k] = clamp_index(pos, in_size);
            w[k] = v;
            total += v;
        }
        for (int k = 0; k < t.taps; ++k) w[k] /= total;
    }
    return t;
}

}  // namespace kernels

Plane resample_plane(const Plane& p, int out_w, int out_h, ResampleFilter filter) {
    const auto tx = kernels::build_axis_table(p.width, out_w, filter);
    const auto ty = kernels::build_axis_table(p.height, out_h, filter);
    return kernels::omp::resample(p, tx, ty);
}

Frame resample_frame(const Frame& f, int out_w, int out_h, ResampleFilter filter) {
    check_dimensions(out_w, out_h);
    Frame out;
    out.y = resample_plane(f.y, out_w, out_h, filter);
    out.u = resample_plane(f.u, out_w / 2, out_h / 2, filter);
    out.v = resample_plane(f.v, out_w / 2, out_h / 2, filter);
    return out;
}

}  // namespace oriq
