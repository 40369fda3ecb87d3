#include "oriq/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>

#include "oriq/error.hpp"

namespace oriq {

nlohmann::json number_to_json(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::string format_sig6(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

nlohmann::json to_json(const SequenceReport& r) {
    using nlohmann::json;
    const auto& m = r.meta;
    const auto& c = m.config;
    json planes = json::array();
    for (auto p : c.planes) planes.push_back(std::string(to_string(p)));

    json meta = {
        {"ref_size", std::to_string(m.ref_width) + "x" + std::to_string(m.ref_height)},
        {"test_size", std::to_string(m.test_width) + "x" + std::to_string(m.test_height)},
        {"frames", m.frames},
        {"config",
         {
             {"sphere_points", c.sphere_points},
             {"cpp_size", c.cpp_width > 0 ? std::to_string(c.cpp_width) + "x" + std::to_string(c.cpp_height)
                                          : std::string("reference")},
             {"cpp_sampling", c.cpp_bicubic ? "bicubic" : "nearest"},
             {"reference_filter", std::string(to_string(c.reference_filter))},
             {"reconstruction_filter", std::string(to_string(c.reconstruction_filter))},
             {"psnr_cap_db", c.psnr_cap_db},
             {"planes", planes},
             {"temporal_pooling", "mean of per-frame dB"},
         }},
        {"notes", m.notes},
        {"warnings", m.warnings},
    };

    json scores = json::array();
    for (const auto& s : r.scores) {
        json frames = json::array();
        for (double v : s.frames) frames.push_back(number_to_json(v));
        scores.push_back({
            {"metric", std::string(to_string(s.metric))},
            {"phase", std::string(to_string(s.phase))},
            {"plane", std::string(to_string(s.plane))},
            {"frames", frames},
            {"average", number_to_json(s.average)},
        });
    }
    return {{"meta", meta}, {"scores", scores}};
}

void write_csv(std::ostream& out, const SequenceReport& r) {
    out << "metric,phase,plane,frame,value\n";
    for (const auto& s : r.scores) {
        const auto prefix = std::string(to_string(s.metric)) + "," + std::string(to_string(s.phase)) + "," +
                            std::string(to_string(s.plane)) + ",";
        for (std::size_t i = 0; i < s.frames.size(); ++i) out << prefix << i << "," << format_sig6(s.frames[i]) << "\n";
        out << prefix << "avg," << format_sig6(s.average) << "\n";
    }
}

void write_text_output(const std::filesystem::path& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string dump_json(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace oriq
