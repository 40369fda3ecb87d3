#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "oriq/yuv_io.hpp"

namespace oriq {

/// Longitude in [-pi, pi), latitude in [-pi/2, pi/2], radians.
struct SphericalCoord {
    double lon = 0.0;
    double lat = 0.0;
};

/// Fractional pixel position; integer values are pixel centers.
struct PixelPos {
    double x = 0.0;
    double y = 0.0;
};

/// A point on the Craster parabolic plane, scaled to x in [-pi, pi] and
/// y in [-pi/2, pi/2] so CPP rasters share ERP dimensions.
struct PlanePoint {
    double x = 0.0;
    double y = 0.0;
    bool valid = true;
};

/// Deterministic near-uniform sphere sampling (Fibonacci lattice).
class SpherePointSet {
public:
    static constexpr std::size_t kDefaultCount = 655362;

    explicit SpherePointSet(std::size_t n = kDefaultCount);

    std::size_t size() const { return coords_.size(); }
    const std::vector<SphericalCoord>& coords() const { return coords_; }
    const std::vector<std::array<double, 3>>& unit_vectors() const { return unit_vectors_; }

private:
    std::vector<SphericalCoord> coords_;
    std::vector<std::array<double, 3>> unit_vectors_;
};

/// Wraps any finite longitude into [-pi, pi).
double normalize_longitude(double lon);

SphericalCoord erp_pixel_to_sph(int i, int j, int width, int height);
PixelPos sph_to_erp_coords(SphericalCoord c, int width, int height);

SpherePointSet fibonacci_point_set(std::size_t n);

PlanePoint cpp_forward(SphericalCoord c);

/// valid is false when the position lies outside the parabolic footprint.
struct InverseResult {
    SphericalCoord coord;
    bool valid = true;
};
/// Throws InvalidArgument for positions outside the plane bounds.
InverseResult cpp_inverse(double x, double y);

/// Plane coordinates of CPP raster pixel (u, v) for a W x H raster; valid
/// marks pixels inside the parabolic footprint.
PlanePoint cpp_pixel_to_plane(int u, int v, int width, int height);

inline int wrap_index(long long i, int n) {
    long long m = i % n;
    return int(m < 0 ? m + n : m);
}

inline int clamp_index(long long i, int n) {
    return int(i < 0 ? 0 : (i >= n ? n - 1 : i));
}

/// Nearest sample with longitude wrap on columns and clamped rows.
inline std::uint8_t sample_nearest(const Plane& p, double x, double y) {
    const int col = wrap_index(static_cast<long long>(std::floor(x + 0.5)), p.width);
    const int row = clamp_index(static_cast<long long>(std::floor(y + 0.5)), p.height);
    return p.at(col, row);
}

/// Cubic convolution weights (a = -0.5) for taps at offsets -1, 0, 1, 2
/// from floor(x), where t = x - floor(x).
inline std::array<double, 4> cubic_weights(double t) {
    const double t2 = t * t;
    const double t3 = t2 * t;
    return {
        -0.5 * t3 + t2 - 0.5 * t,
        1.5 * t3 - 2.5 * t2 + 1.0,
        -1.5 * t3 + 2.0 * t2 + 0.5 * t,
        0.5 * t3 - 0.5 * t2,
    };
}

/// Separable 4x4 cubic interpolation, columns wrap, rows clamp; the
/// result is clamped to [0, 255] and left unrounded.
inline double sample_bicubic(const Plane& p, double x, double y) {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto wx = cubic_weights(x - fx);
    const auto wy = cubic_weights(y - fy);
    const long long x0 = static_cast<long long>(fx) - 1;
    const long long y0 = static_cast<long long>(fy) - 1;
    std::array<int, 4> cols{};
    for (int k = 0; k < 4; ++k) cols[k] = wrap_index(x0 + k, p.width);
    double acc = 0.0;
    for (int r = 0; r < 4; ++r) {
        const std::uint8_t* row = p.samples.data() + std::size_t(clamp_index(y0 + r, p.height)) * std::size_t(p.width);
        double h = 0.0;
        for (int k = 0; k < 4; ++k) h += wx[k] * row[cols[k]];
        acc += wy[r] * h;
    }
    return acc < 0.0 ? 0.0 : (acc > 255.0 ? 255.0 : acc);
}

}  // namespace oriq
