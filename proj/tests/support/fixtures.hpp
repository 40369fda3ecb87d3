#pragma once

// Synthetic inputs shared by the unit tests, the acceptance binary and the
// benchmark. Everything is seeded and built in memory.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "oriq/avmodels.hpp"
#include "oriq/random.hpp"
#include "oriq/yuv_io.hpp"

namespace oriq::test {

inline Frame constant_frame(int w, int h, std::uint8_t v) {
    Frame f(w, h);
    for (PlaneId id : {PlaneId::Y, PlaneId::U, PlaneId::V}) {
        auto& p = f.plane(id);
        std::fill(p.samples.begin(), p.samples.end(), v);
    }
    return f;
}

inline std::vector<Frame> constant_video(int w, int h, std::uint8_t v, std::size_t n) {
    return std::vector<Frame>(n, constant_frame(w, h, v));
}

/// Band-limited content that is periodic in x, values roughly 40..216.
inline Plane smooth_plane(int w, int h, double shift = 0.0) {
    Plane p(w, h);
    for (int y = 0; y < h; ++y) {
        const double v = (y + 0.5) / h;
        for (int x = 0; x < w; ++x) {
            const double u = (x + 0.5) / w;
            const double s = 128.0 + 55.0 * std::sin(2.0 * std::numbers::pi * (u + shift)) * std::cos(std::numbers::pi * (v - 0.5)) +
                             30.0 * std::cos(2.0 * std::numbers::pi * (2.0 * u + v + shift));
            p.at(x, y) = std::uint8_t(std::lround(std::clamp(s, 0.0, 255.0)));
        }
    }
    return p;
}

/// Horizontal + vertical ramp, no wrap continuity.
inline Plane gradient_plane(int w, int h) {
    Plane p(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            p.at(x, y) = std::uint8_t(std::lround(30.0 + 150.0 * (x + 0.5) / w + 60.0 * (y + 0.5) / h));
        }
    }
    return p;
}

inline Frame smooth_frame(int w, int h, double shift = 0.0) {
    Frame f(w, h);
    f.y = smooth_plane(w, h, shift);
    f.u = smooth_plane(w / 2, h / 2, shift + 0.25);
    f.v = smooth_plane(w / 2, h / 2, shift + 0.5);
    return f;
}

inline std::vector<Frame> smooth_video(int w, int h, std::size_t n) {
    std::vector<Frame> out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(smooth_frame(w, h, 0.03 * double(k)));
    return out;
}

/// Seeded +-1 pattern with one entry per sample of every plane.
inline std::vector<int> sign_pattern(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<int> s(n);
    for (auto& v : s) v = (rng.next() >> 63) ? 1 : -1;
    return s;
}

/// Adds amplitude * sign to every sample (clamped to 8 bit).
inline Plane add_noise(const Plane& p, int amplitude, std::uint64_t seed) {
    Plane out = p;
    const auto s = sign_pattern(p.size(), seed);
    for (std::size_t i = 0; i < p.size(); ++i) {
        out.samples[i] = std::uint8_t(std::clamp(int(p.samples[i]) + amplitude * s[i], 0, 255));
    }
    return out;
}

inline Frame add_noise(const Frame& f, int amplitude, std::uint64_t seed) {
    Frame out;
    out.y = add_noise(f.y, amplitude, seed);
    out.u = add_noise(f.u, amplitude, seed + 1);
    out.v = add_noise(f.v, amplitude, seed + 2);
    return out;
}

inline std::vector<Frame> add_noise(const std::vector<Frame>& v, int amplitude, std::uint64_t seed) {
    std::vector<Frame> out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(add_noise(v[k], amplitude, mix_seed(seed, k)));
    return out;
}

/// MOS_AV = 0.2 + 0.16 A V + N(0, sigma), with A, V uniform on [lo, hi];
/// MOS_AV is clipped to the 1..5 rating scale. Contents cycle over `contents`.
inline std::vector<AvSample> multiplicative_population(std::size_t n, std::uint64_t seed, double sigma = 0.2,
                                                         double lo = 1.5, double hi = 5.0, int contents = 5) {
    Rng rng(seed);
    std::vector<AvSample> out;
    for (std::size_t i = 0; i < n; ++i) {
        AvSample s;
        s.content_id = "c" + std::to_string(int(i) % contents);
        s.condition_id = "k" + std::to_string(i);
        s.mos_a = rng.uniform(lo, hi);
        s.mos_v = rng.uniform(lo, hi);
        s.mos_av = std::clamp(0.2 + 0.16 * s.mos_a * s.mos_v + sigma * rng.normal(), 1.0, 5.0);
        out.push_back(s);
    }
    return out;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("oriq_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace oriq::test
