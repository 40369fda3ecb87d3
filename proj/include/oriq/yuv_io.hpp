#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

namespace oriq {

/// Raw 8-bit 4:2:0 planar (I420) video, no header.
struct VideoSpec {
    int width = 0;
    int height = 0;
    std::size_t frame_count = 0;

    std::size_t luma_size() const { return std::size_t(width) * std::size_t(height); }
    std::size_t chroma_size() const { return luma_size() / 4; }
    std::size_t frame_bytes() const { return luma_size() * 3 / 2; }
};

/// Row-major 8-bit sample plane.
struct Plane {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> samples;

    Plane() = default;
    Plane(int w, int h, std::uint8_t fill = 0);

    std::uint8_t at(int x, int y) const { return samples[std::size_t(y) * std::size_t(width) + std::size_t(x)]; }
    std::uint8_t& at(int x, int y) { return samples[std::size_t(y) * std::size_t(width) + std::size_t(x)]; }
    std::size_t size() const { return samples.size(); }

    friend bool operator==(const Plane&, const Plane&) = default;
};

enum class PlaneId { Y = 0, U = 1, V = 2 };

std::string_view to_string(PlaneId id);

struct Frame {
    Plane y;
    Plane u;
    Plane v;

    Frame() = default;
    /// Allocates a W x H frame; W and H must be even.
    Frame(int width, int height);

    const Plane& plane(PlaneId id) const;
    Plane& plane(PlaneId id);
    int width() const { return y.width; }
    int height() const { return y.height; }

    friend bool operator==(const Frame&, const Frame&) = default;
};

/// Validates even positive dimensions, throws InvalidArgument otherwise.
void check_dimensions(int width, int height);

/// Parses "WxH" with even positive components.
std::pair<int, int> parse_size(std::string_view text);

VideoSpec probe_yuv(const std::filesystem::path& path, int width, int height);

Frame read_frame(const VideoSpec& spec, const std::filesystem::path& path, std::size_t index);

/// Reads frames [0, count) sequentially; count is clipped to the file.
std::vector<Frame> read_frames(const VideoSpec& spec, const std::filesystem::path& path, std::size_t count);

void write_frames(const std::filesystem::path& path, const std::vector<Frame>& frames);

enum class ResampleFilter { Nearest, Bilinear, Lanczos3 };

std::string_view to_string(ResampleFilter f);
ResampleFilter parse_filter(std::string_view name);

/// Separable resampler with pixel-center alignment, edge clamping and
/// normalized kernels. Kernels widen by the scale factor when shrinking.
/// Same-size axes pass through untouched.
Plane resample_plane(const Plane& p, int out_w, int out_h, ResampleFilter filter);

Frame resample_frame(const Frame& f, int out_w, int out_h, ResampleFilter filter);

}  // namespace oriq
