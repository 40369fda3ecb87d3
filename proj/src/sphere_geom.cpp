#include "oriq/sphere_geom.hpp"

#include <string>

#include "oriq/error.hpp"

namespace oriq {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double normalize_longitude(double lon) {
    double r = std::fmod(lon + kPi, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    r -= kPi;
    // fmod can land exactly on +pi after the shift back
    return r >= kPi ? -kPi : r;
}

SphericalCoord erp_pixel_to_sph(int i, int j, int width, int height) {
    return {(i + 0.5) / width * kTwoPi - kPi, kPi / 2.0 - (j + 0.5) / height * kPi};
}

PixelPos sph_to_erp_coords(SphericalCoord c, int width, int height) {
    return {(c.lon + kPi) / kTwoPi * width - 0.5, (kPi / 2.0 - c.lat) / kPi * height - 0.5};
}

SpherePointSet::SpherePointSet(std::size_t n) {
    if (n == 0) throw InvalidArgument("sphere point set needs at least one point");
    // fractional part of the golden-angle turn, 1 - 1/phi
    const double turn = 1.0 - 2.0 / (1.0 + std::sqrt(5.0));
    coords_.reserve(n);
    unit_vectors_.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double z = 1.0 - (2.0 * double(k) + 1.0) / double(n);
        const double lat = std::asin(z);
        const double frac = std::fmod(double(k) * turn, 1.0);
        const double lon = normalize_longitude(kTwoPi * frac);
        coords_.push_back({lon, lat});
        const double cl = std::cos(lat);
        unit_vectors_.push_back({cl * std::cos(lon), cl * std::sin(lon), std::sin(lat)});
    }
}

SpherePointSet fibonacci_point_set(std::size_t n) { return SpherePointSet(n); }

PlanePoint cpp_forward(SphericalCoord c) {
    return {c.lon * (2.0 * std::cos(2.0 * c.lat / 3.0) - 1.0), kPi * std::sin(c.lat / 3.0), true};
}

InverseResult cpp_inverse(double x, double y) {
    if (!(std::abs(x) <= kPi) || !(std::abs(y) <= kPi / 2.0)) {
        throw InvalidArgument("CPP plane coordinate out of bounds: (" + std::to_string(x) + ", " +
                              std::to_string(y) + ")");
    }
    const double lat = 3.0 * std::asin(y / kPi);
    if (std::abs(y) == kPi / 2.0) return {{0.0, lat}, true};
    const double lon = x / (2.0 * std::cos(2.0 * lat / 3.0) - 1.0);
    if (std::abs(lon) > kPi) return {{lon, lat}, false};
    return {{lon, lat}, true};
}

PlanePoint cpp_pixel_to_plane(int u, int v, int width, int height) {
    const double x = (u + 0.5) / width * kTwoPi - kPi;
    const double y = kPi / 2.0 - (v + 0.5) / height * kPi;
    return {x, y, cpp_inverse(x, y).valid};
}

}  // namespace oriq
