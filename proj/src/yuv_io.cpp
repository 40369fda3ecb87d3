#include "oriq/yuv_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <string>
#include <system_error>

#include "oriq/error.hpp"

namespace oriq {

Plane::Plane(int w, int h, std::uint8_t fill)
    : width(w), height(h), samples(std::size_t(w) * std::size_t(h), fill) {
    if (w < 1 || h < 1) throw InvalidArgument("plane dimensions must be positive");
}

std::string_view to_string(PlaneId id) {
    switch (id) {
        case PlaneId::Y: return "Y";
        case PlaneId::U: return "U";
        case PlaneId::V: return "V";
    }
    return "?";
}

Frame::Frame(int width, int height) {
    check_dimensions(width, height);
    y = Plane(width, height);
    u = Plane(width / 2, height / 2);
    v = Plane(width / 2, height / 2);
}

const Plane& Frame::plane(PlaneId id) const {
    switch (id) {
        case PlaneId::U: return u;
        case PlaneId::V: return v;
        default: return y;
    }
}

Plane& Frame::plane(PlaneId id) {
    return const_cast<Plane&>(static_cast<const Frame&>(*this).plane(id));
}

void check_dimensions(int width, int height) {
    if (width < 2 || height < 2 || width % 2 != 0 || height % 2 != 0) {
        throw InvalidArgument("4:2:0 dimensions must be even and >= 2, got " + std::to_string(width) + "x" +
                              std::to_string(height));
    }
}

std::pair<int, int> parse_size(std::string_view text) {
    const auto sep = text.find_first_of("xX");
    int w = 0;
    int h = 0;
    auto bad = [&] { return InvalidArgument("size must look like WxH, got '" + std::string(text) + "'"); };
    if (sep == std::string_view::npos) throw bad();
    const auto* b = text.data();
    const auto* e = text.data() + text.size();
    auto r1 = std::from_chars(b, b + sep, w);
    auto r2 = std::from_chars(b + sep + 1, e, h);
    if (r1.ec != std::errc{} || r1.ptr != b + sep || r2.ec != std::errc{} || r2.ptr != e) throw bad();
    check_dimensions(w, h);
    return {w, h};
}

VideoSpec probe_yuv(const std::filesystem::path& path, int width, int height) {
    check_dimensions(width, height);
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw IoError("cannot open '" + path.string() + "'");
    const auto bytes = std::filesystem::file_size(path, ec);
    if (ec) throw IoError("cannot stat '" + path.string() + "': " + ec.message());

    VideoSpec spec{width, height, 0};
    if (bytes == 0) throw FormatError("'" + path.string() + "' is empty");
    if (bytes % spec.frame_bytes() != 0) {
        throw FormatError("'" + path.string() + "': " + std::to_string(bytes) + " bytes is not a multiple of the " +
                          std::to_string(width) + "x" + std::to_string(height) +
                          " frame size; truncated or misdeclared dimensions");
    }
    spec.frame_count = bytes / spec.frame_bytes();
    return spec;
}

namespace {

void read_into(std::ifstream& in, Plane& p, const std::filesystem::path& path) {
    in.read(reinterpret_cast<char*>(p.samples.data()), std::streamsize(p.samples.size()));
    if (!in) throw IoError("short read from '" + path.string() + "'");
}

}  // namespace

Frame read_frame(const VideoSpec& spec, const std::filesystem::path& path, std::size_t index) {
    if (index >= spec.frame_count) {
        throw InvalidArgument("frame index " + std::to_string(index) + " out of range [0, " +
                              std::to_string(spec.frame_count) + ")");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    in.seekg(std::streamoff(index * spec.frame_bytes()));
    Frame f(spec.width, spec.height);
    read_into(in, f.y, path);
    read_into(in, f.u, path);
    read_into(in, f.v, path);
    return f;
}

std::vector<Frame> read_frames(const VideoSpec& spec, const std::filesystem::path& path, std::size_t count) {
    count = std::min(count, spec.frame_count);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::vector<Frame> frames;
    frames.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Frame f(spec.width, spec.height);
        read_into(in, f.y, path);
        read_into(in, f.u, path);
        read_into(in, f.v, path);
        frames.push_back(std::move(f));
    }
    return frames;
}

void write_frames(const std::filesystem::path& path, const std::vector<Frame>& frames) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    for (const auto& f : frames) {
        for (const Plane* p : {&f.y, &f.u, &f.v}) {
            out.write(reinterpret_cast<const char*>(p->samples.data()), std::streamsize(p->samples.size()));
        }
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace oriq
