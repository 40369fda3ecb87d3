#include <fstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "oriq/error.hpp"
#include "oriq/yuv_io.hpp"

using namespace oriq;

namespace {

void write_bytes(const std::filesystem::path& p, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

}  // namespace

TEST_CASE("dimension parsing") {
    CHECK(parse_size("64x32") == std::pair{64, 32});
    CHECK(parse_size("3840X1920") == std::pair{3840, 1920});
    CHECK_THROWS_AS(parse_size("63x32"), InvalidArgument);
    CHECK_THROWS_AS(parse_size("64x"), InvalidArgument);
    CHECK_THROWS_AS(parse_size("64x32x2"), InvalidArgument);
    CHECK_THROWS_AS(Frame(6, 3), InvalidArgument);
}

TEST_CASE("probe_yuv frame arithmetic") {
    const auto dir = test::scratch_dir("probe");
    const auto big = dir / "big.yuv";
    { std::ofstream(big, std::ios::binary); }
    std::filesystem::resize_file(big, 3686400);
    CHECK(probe_yuv(big, 1280, 1920).frame_count == 1);
    CHECK(probe_yuv(big, 1280, 960).frame_count == 2);

    const VideoSpec s{8, 4, 0};
    const auto three = dir / "three.yuv";
    write_bytes(three, std::vector<std::uint8_t>(3 * s.frame_bytes(), 7));
    CHECK(probe_yuv(three, 8, 4).frame_count == 3);

    const auto odd = dir / "odd.yuv";
    write_bytes(odd, std::vector<std::uint8_t>(s.frame_bytes() + 1, 7));
    CHECK_THROWS_WITH_AS(probe_yuv(odd, 8, 4), doctest::Contains("truncated or misdeclared dimensions"), FormatError);

    const auto empty = dir / "empty.yuv";
    write_bytes(empty, {});
    CHECK_THROWS_AS(probe_yuv(empty, 8, 4), FormatError);
    CHECK_THROWS_AS(probe_yuv(dir / "missing.yuv", 8, 4), IoError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("read_frame layout and range") {
    const auto dir = test::scratch_dir("read");
    const VideoSpec s{4, 2, 2};
    std::vector<std::uint8_t> bytes(2 * s.frame_bytes());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = std::uint8_t(i);
    const auto path = dir / "seq.yuv";
    write_bytes(path, bytes);

    const auto spec = probe_yuv(path, 4, 2);
    const Frame f1 = read_frame(spec, path, 1);
    const std::size_t off = s.frame_bytes();
    CHECK(f1.y.at(0, 0) == bytes[off]);
    CHECK(f1.y.at(3, 1) == bytes[off + 7]);
    CHECK(f1.u.width == 2);
    CHECK(f1.u.height == 1);
    CHECK(f1.u.at(0, 0) == bytes[off + 8]);
    CHECK(f1.v.at(1, 0) == bytes[off + 11]);
    CHECK(read_frame(spec, path, 1) == f1);
    CHECK_THROWS_AS(read_frame(spec, path, 2), InvalidArgument);

    const auto zero = dir / "zero.yuv";
    write_bytes(zero, std::vector<std::uint8_t>(s.frame_bytes(), 0));
    const Frame z = read_frame(probe_yuv(zero, 4, 2), zero, 0);
    CHECK(z == Frame(4, 2));

    const auto frames = read_frames(spec, path, 10);
    CHECK(frames.size() == 2);
    const auto copy = dir / "copy.yuv";
    write_frames(copy, frames);
    CHECK(std::filesystem::file_size(copy) == bytes.size());
    CHECK(read_frames(probe_yuv(copy, 4, 2), copy, 0).size() == 0);
    CHECK(read_frames(probe_yuv(copy, 4, 2), copy, 2) == frames);
    std::filesystem::remove_all(dir);
}

TEST_CASE("nearest replication with pixel-center mapping") {
    Plane p(2, 2);
    p.at(1, 0) = 255;
    p.at(1, 1) = 255;
    const Plane r = resample_plane(p, 4, 2, ResampleFilter::Nearest);
    const std::vector<std::uint8_t> expect{0, 0, 255, 255, 0, 0, 255, 255};
    CHECK(r.samples == expect);
}

TEST_CASE("same-size resampling is the identity") {
    const Plane p = test::smooth_plane(32, 16);
    for (auto f : {ResampleFilter::Nearest, ResampleFilter::Bilinear, ResampleFilter::Lanczos3}) {
        CHECK(resample_plane(p, 32, 16, f) == p);
    }
}

TEST_CASE("constant planes stay constant") {
    const Plane p(12, 8, 128);
    for (auto f : {ResampleFilter::Nearest, ResampleFilter::Bilinear, ResampleFilter::Lanczos3}) {
        for (auto [w, h] : {std::pair{24, 16}, {6, 4}, {7, 13}, {50, 2}}) {
            const Plane r = resample_plane(p, w, h, f);
            CHECK(r.width == w);
            CHECK(r.height == h);
            CHECK(r == Plane(w, h, 128));
        }
    }
}

TEST_CASE("lanczos3 2:1 round trip on a gradient") {
    const Plane g = test::gradient_plane(64, 32);
    const Plane down = resample_plane(g, 32, 16, ResampleFilter::Lanczos3);
    const Plane up = resample_plane(down, 64, 32, ResampleFilter::Lanczos3);
    int worst = 0;
    for (std::size_t i = 0; i < g.size(); ++i) worst = std::max(worst, std::abs(int(g.samples[i]) - int(up.samples[i])));
    CHECK(worst <= 8);
}

TEST_CASE("bilinear midpoint") {
    Plane p(2, 1);
    p.at(0, 0) = 10;
    p.at(1, 0) = 20;
    // 3 outputs: centers map to -1/6, 0.5, 7/6 in source space
    const Plane r = resample_plane(p, 3, 1, ResampleFilter::Bilinear);
    CHECK(r.at(0, 0) == 10);
    CHECK(r.at(1, 0) == 15);
    CHECK(r.at(2, 0) == 20);
}

TEST_CASE("frame resampling halves chroma") {
    const Frame f = test::smooth_frame(16, 8);
    const Frame r = resample_frame(f, 32, 16, ResampleFilter::Lanczos3);
    CHECK(r.u.width == 16);
    CHECK(r.v.height == 8);
    CHECK_THROWS_AS(resample_frame(f, 31, 16, ResampleFilter::Nearest), InvalidArgument);
}

TEST_CASE("filter names") {
    CHECK(parse_filter("lanczos3") == ResampleFilter::Lanczos3);
    CHECK(to_string(ResampleFilter::Bilinear) == "bilinear");
    CHECK_THROWS_AS(parse_filter("bicubic"), InvalidArgument);
}
