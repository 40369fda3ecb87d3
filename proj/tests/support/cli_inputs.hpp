#pragma once

// Writes a small on-disk workspace exercising every CLI subcommand.

#include <fstream>
#include <string>

#include "fixtures.hpp"
#include "oriq/random.hpp"
#include "oriq/yuv_io.hpp"

namespace oriq::test {

struct CliInputs {
    std::filesystem::path dir;
    std::filesystem::path ref_yuv;   // 64x32, 3 frames
    std::filesystem::path test_yuv;  // 32x16, 3 frames
    std::filesystem::path scores;    // A, V, AV ratings, 4 assessors
    std::filesystem::path metrics;   // two metrics over the same conditions
    std::filesystem::path samples;   // av samples
    std::filesystem::path factors_toml;
    std::filesystem::path one_factor_toml;
};

inline void write_text(const std::filesystem::path& p, const std::string& s) {
    std::ofstream out(p, std::ios::binary);
    out << s;
}

inline CliInputs make_cli_inputs(const std::string& name) {
    CliInputs in;
    in.dir = scratch_dir(name);
    in.ref_yuv = in.dir / "ref.yuv";
    in.test_yuv = in.dir / "test.yuv";
    const auto ref = smooth_video(64, 32, 3);
    std::vector<Frame> low;
    for (const auto& f : ref) low.push_back(add_noise(resample_frame(f, 32, 16, ResampleFilter::Lanczos3), 3, 5));
    write_frames(in.ref_yuv, ref);
    write_frames(in.test_yuv, low);

    Rng rng(31);
    std::string scores = "assessor_id,content_id,condition_id,modality,score\n";
    std::string metrics = "content_id,condition_id,metric,phase,value\n";
    std::string samples = "content_id,condition_id,mos_a,mos_v,mos_av\n";
    for (int c = 0; c < 3; ++c) {
        for (int k = 0; k < 8; ++k) {
            const std::string content = "c" + std::to_string(c);
            const std::string cond = "q" + std::to_string(22 + k);
            const double a = rng.uniform(1.5, 5.0);
            const double v = rng.uniform(1.5, 5.0);
            const double av = std::clamp(0.2 + 0.16 * a * v + 0.1 * rng.normal(), 1.0, 5.0);
            samples += content + "," + cond + "," + std::to_string(a) + "," + std::to_string(v) + "," + std::to_string(av) + "\n";
            for (int s = 0; s < 4; ++s) {
                const auto rating = [&](double mu) { return std::to_string(std::clamp(mu + 0.3 * rng.normal(), 1.0, 5.0)); };
                const std::string who = "s" + std::to_string(s) + "," + content + "," + cond;
                scores += who + ",A," + rating(a) + "\n";
                scores += who + ",V," + rating(v) + "\n";
                scores += who + ",AV," + rating(av) + "\n";
            }
            metrics += content + "," + cond + ",S-PSNR-NN,cf," + std::to_string(25 + 4 * v + rng.normal()) + "\n";
            metrics += content + "," + cond + ",PSNR,codec," + std::to_string(30 + rng.normal()) + "\n";
        }
    }
    in.scores = in.dir / "scores.csv";
    in.metrics = in.dir / "metrics.csv";
    in.samples = in.dir / "av_samples.csv";
    write_text(in.scores, scores);
    write_text(in.metrics, metrics);
    write_text(in.samples, samples);

    in.factors_toml = in.dir / "factors.toml";
    write_text(in.factors_toml,
               "[[factor]]\nname = \"QP\"\nlevels = [22, 27, 32, 37]\ncoding = \"numeric\"\n\n"
               "[[factor]]\nname = \"Resolution\"\nlevels = [\"4K\", \"FHD\", \"HD\"]\n");
    in.one_factor_toml = in.dir / "one_2level.toml";
    write_text(in.one_factor_toml, "[[factor]]\nname = \"A\"\nlevels = [\"lo\", \"hi\"]\n");
    return in;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace oriq::test
