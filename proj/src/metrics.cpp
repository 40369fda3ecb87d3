#include "oriq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <limits>
#include <numbers>
#include <optional>

#include "oriq/error.hpp"
#include "oriq/kernels.hpp"

namespace oriq {

namespace {

constexpr double kPeak2 = 255.0 * 255.0;

std::string dims(int w, int h) { return std::to_string(w) + "x" + std::to_string(h); }

void require_same_dims(const Plane& a, const Plane& b, std::string_view what) {
    if (a.width != b.width || a.height != b.height) {
        throw InvalidArgument(std::string(what) + ": dimension mismatch " + dims(a.width, a.height) + " vs " +
                              dims(b.width, b.height));
    }
}

bool plane_domain(MetricKind m) { return m == MetricKind::PSNR || m == MetricKind::WS_PSNR; }

}  // namespace

std::string_view to_string(MetricKind m) {
    switch (m) {
        case MetricKind::PSNR: return "PSNR";
        case MetricKind::WS_PSNR: return "WS-PSNR";
        case MetricKind::SPSNR_NN: return "S-PSNR-NN";
        case MetricKind::SPSNR_I: return "S-PSNR-I";
        case MetricKind::CPP_PSNR: return "CPP-PSNR";
    }
    return "?";
}

std::string_view to_string(Phase p) {
    switch (p) {
        case Phase::Codec: return "codec";
        case Phase::CrossFormat: return "cf";
        case Phase::EndToEnd: return "e2e";
    }
    return "?";
}

MetricKind parse_metric(std::string_view s) {
    std::string k;
    for (char c : s) {
        if (c != '-' && c != '_') k.push_back(char(std::tolower(static_cast<unsigned char>(c))));
    }
    if (k == "psnr") return MetricKind::PSNR;
    if (k == "wspsnr") return MetricKind::WS_PSNR;
    if (k == "spsnrnn") return MetricKind::SPSNR_NN;
    if (k == "spsnri") return MetricKind::SPSNR_I;
    if (k == "cpppsnr") return MetricKind::CPP_PSNR;
    throw InvalidArgument("unknown metric '" + std::string(s) + "'");
}

Phase parse_phase(std::string_view s) {
    if (s == "codec") return Phase::Codec;
    if (s == "cf" || s == "cross-format" || s == "crossformat") return Phase::CrossFormat;
    if (s == "e2e" || s == "end-to-end" || s == "endtoend") return Phase::EndToEnd;
    throw InvalidArgument("unknown phase '" + std::string(s) + "'");
}

const std::vector<MetricPhase>& standard_pairs() {
    static const std::vector<MetricPhase> pairs{
        {MetricKind::PSNR, Phase::Codec},           {MetricKind::WS_PSNR, Phase::Codec},
        {MetricKind::SPSNR_NN, Phase::CrossFormat}, {MetricKind::SPSNR_I, Phase::CrossFormat},
        {MetricKind::CPP_PSNR, Phase::CrossFormat}, {MetricKind::SPSNR_NN, Phase::EndToEnd},
        {MetricKind::SPSNR_I, Phase::EndToEnd},     {MetricKind::CPP_PSNR, Phase::EndToEnd},
        {MetricKind::WS_PSNR, Phase::EndToEnd},
    };
    return pairs;
}

void MetricConfig::validate() const {
    if (sphere_points < 1) throw InvalidArgument("sphere_points must be >= 1");
    if (!(psnr_cap_db > 0.0)) throw InvalidArgument("psnr_cap_db must be > 0");
    if (cpp_width < 0 || cpp_height < 0) throw InvalidArgument("CPP raster dimensions must be non-negative");
    if (planes.empty()) throw InvalidArgument("at least one plane must be selected");
}

SseResult sse_plane(const Plane& ref, const Plane& test) {
    require_same_dims(ref, test, "sse_plane");
    return {kernels::omp::sse(ref.samples, test.samples), ref.samples.size()};
}

double psnr_from_mse(double mse) {
    if (!(mse >= 0.0)) throw InvalidArgument("negative or NaN MSE");
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(kPeak2 / mse);
}

double psnr_frame(const Plane& ref, const Plane& test) {
    const auto r = sse_plane(ref, test);
    return psnr_from_mse(double(r.sse) / double(r.count));
}

std::vector<double> ws_weights(int height) {
    std::vector<double> w(static_cast<std::size_t>(height));
    for (int j = 0; j < height; ++j) {
        w[std::size_t(j)] = std::cos((j + 0.5 - height / 2.0) * std::numbers::pi / height);
    }
    return w;
}

double ws_psnr_frame(const Plane& ref, const Plane& test) {
    require_same_dims(ref, test, "ws_psnr_frame");
    std::vector<std::uint64_t> rows(static_cast<std::size_t>(ref.height));
    kernels::omp::row_sse(ref, test, rows);
    const auto w = ws_weights(ref.height);
    kernels::CompensatedSum num;
    kernels::CompensatedSum den;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        num.add(w[j] * double(rows[j]));
        den.add(w[j] * double(ref.width));
    }
    return psnr_from_mse(num.value() / den.value());
}

SphereSampler::SphereSampler(std::span<const SphericalCoord> coords, int width, int height) {
    nearest_.reserve(coords.size());
    positions_.reserve(coords.size());
    for (const auto& c : coords) {
        const auto p = sph_to_erp_coords(c, width, height);
        const int col = wrap_index(static_cast<long long>(std::floor(p.x + 0.5)), width);
        const int row = clamp_index(static_cast<long long>(std::floor(p.y + 0.5)), height);
        nearest_.push_back(std::uint32_t(row) * std::uint32_t(width) + std::uint32_t(col));
        positions_.push_back(p);
    }
}

SphereSampler::SphereSampler(const SpherePointSet& pts, int width, int height)
    : SphereSampler(std::span<const SphericalCoord>(pts.coords()), width, height) {}

CppRaster::CppRaster(int width, int height) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw InvalidArgument("CPP raster dimensions must be positive");
    mask_.assign(std::size_t(width) * std::size_t(height), 0);
    for (int v = 0; v < height; ++v) {
        for (int u = 0; u < width; ++u) {
            const auto pp = cpp_pixel_to_plane(u, v, width, height);
            if (!pp.valid) continue;
            const auto inv = cpp_inverse(pp.x, pp.y);
            mask_[std::size_t(v) * std::size_t(width) + std::size_t(u)] = 1;
            coords_.push_back(inv.coord);
        }
    }
}

SphereSampler CppRaster::sampler_for(int erp_width, int erp_height) const {
    return SphereSampler(coords_, erp_width, erp_height);
}

double nearest_mse(const Plane& ref, const SphereSampler& rs, const Plane& test, const SphereSampler& ts) {
    if (rs.size() == 0 || rs.size() != ts.size()) throw DegenerateData("empty or mismatched sample set");
    const auto sse = kernels::omp::gather_sse(ref.samples, rs.nearest(), test.samples, ts.nearest());
    return double(sse) / double(rs.size());
}

double bicubic_mse(const Plane& ref, const SphereSampler& rs, const Plane& test, const SphereSampler& ts) {
    if (rs.size() == 0 || rs.size() != ts.size()) throw DegenerateData("empty or mismatched sample set");
    return kernels::omp::bicubic_sse(ref, rs.positions(), test, ts.positions()) / double(rs.size());
}

double spsnr_nn_frame(const Plane& ref, const Plane& test, const SpherePointSet& pts) {
    if (pts.size() == 0) throw InvalidArgument("empty sphere point set");
    return psnr_from_mse(nearest_mse(ref, SphereSampler(pts, ref.width, ref.height), test,
                                     SphereSampler(pts, test.width, test.height)));
}

double spsnr_i_frame(const Plane& ref, const Plane& test, const SpherePointSet& pts) {
    if (pts.size() == 0) throw InvalidArgument("empty sphere point set");
    return psnr_from_mse(bicubic_mse(ref, SphereSampler(pts, ref.width, ref.height), test,
                                     SphereSampler(pts, test.width, test.height)));
}

double cpp_psnr_frame(const Plane& ref, const Plane& test, const MetricConfig& cfg) {
    const CppRaster raster(cfg.cpp_width > 0 ? cfg.cpp_width : ref.width,
                           cfg.cpp_height > 0 ? cfg.cpp_height : ref.height);
    if (raster.coords().empty()) throw DegenerateData("CPP raster has an empty valid mask");
    const auto rs = raster.sampler_for(ref.width, ref.height);
    const auto ts = raster.sampler_for(test.width, test.height);
    return psnr_from_mse(cfg.cpp_bicubic ? bicubic_mse(ref, rs, test, ts) : nearest_mse(ref, rs, test, ts));
}

const ScoreSeries* SequenceReport::find(MetricKind m, Phase p, PlaneId plane) const {
    for (const auto& s : scores) {
        if (s.metric == m && s.phase == p && s.plane == plane) return &s;
    }
    return nullptr;
}

double capped_mean(const std::vector<double>& frames, double cap) {
    if (frames.empty()) return std::numeric_limits<double>::quiet_NaN();
    kernels::CompensatedSum acc;
    for (double v : frames) acc.add(std::min(v, cap));
    return acc.value() / double(frames.size());
}

std::vector<MetricPhase> select_pairs(const std::vector<Phase>& phases, const std::vector<MetricKind>& metrics) {
    std::vector<MetricPhase> out;
    for (const auto& mp : standard_pairs()) {
        if (std::find(phases.begin(), phases.end(), mp.phase) != phases.end() &&
            std::find(metrics.begin(), metrics.end(), mp.metric) != metrics.end()) {
            out.push_back(mp);
        }
    }
    if (out.empty()) throw InvalidArgument("no standard (metric, phase) pair matches the selection");
    return out;
}

SequenceEvaluator::SequenceEvaluator(int ref_width, int ref_height, int test_width, int test_height,
                                     std::vector<MetricPhase> pairs, MetricConfig cfg)
    : pairs_(std::move(pairs)), cfg_(std::move(cfg)) {
    cfg_.validate();
    check_dimensions(ref_width, ref_height);
    check_dimensions(test_width, test_height);
    if (pairs_.empty()) throw InvalidArgument("no (metric, phase) pairs requested");
    const bool same = ref_width == test_width && ref_height == test_height;
    bool spherical = false;
    for (const auto& mp : pairs_) {
        if (mp.phase == Phase::CrossFormat && plane_domain(mp.metric) && !same) {
            throw InvalidArgument(std::string(to_string(mp.metric)) +
                                  " cannot be computed cross-format between " + dims(ref_width, ref_height) +
                                  " and " + dims(test_width, test_height));
        }
        spherical = spherical || mp.metric == MetricKind::SPSNR_NN || mp.metric == MetricKind::SPSNR_I;
    }
    if (spherical) points_ = std::make_unique<SpherePointSet>(cfg_.sphere_points);

    auto& m = report_.meta;
    m.ref_width = ref_width;
    m.ref_height = ref_height;
    m.test_width = test_width;
    m.test_height = test_height;
    m.config = cfg_;
    auto uses = [&](Phase p) {
        return std::any_of(pairs_.begin(), pairs_.end(), [p](const MetricPhase& mp) { return mp.phase == p; });
    };
    if (!same && uses(Phase::Codec)) {
        m.notes.push_back("codec phase: reference resampled " + dims(ref_width, ref_height) + " -> " +
                          dims(test_width, test_height) + " (" + std::string(to_string(cfg_.reference_filter)) + ")");
    }
    if (!same && uses(Phase::EndToEnd)) {
        m.notes.push_back("end-to-end phase: test reconstructed " + dims(test_width, test_height) + " -> " +
                          dims(ref_width, ref_height) + " (" + std::string(to_string(cfg_.reconstruction_filter)) +
                          ")");
    }

    for (const auto& mp : pairs_) {
        for (PlaneId pl : cfg_.planes) report_.scores.push_back({mp.metric, mp.phase, pl, {}, 0.0});
    }
}

SequenceEvaluator::~SequenceEvaluator() = default;

const SphereSampler& SequenceEvaluator::sphere_sampler(int w, int h) {
    auto it = sphere_samplers_.find({w, h});
    if (it == sphere_samplers_.end()) it = sphere_samplers_.emplace(std::pair{w, h}, SphereSampler(*points_, w, h)).first;
    return it->second;
}

const CppRaster& SequenceEvaluator::cpp_raster(PlaneId plane) {
    auto it = cpp_rasters_.find(plane);
    if (it == cpp_rasters_.end()) {
        int w = cfg_.cpp_width > 0 ? cfg_.cpp_width : report_.meta.ref_width;
        int h = cfg_.cpp_height > 0 ? cfg_.cpp_height : report_.meta.ref_height;
        if (plane != PlaneId::Y) {
            w = std::max(1, w / 2);
            h = std::max(1, h / 2);
        }
        it = cpp_rasters_.emplace(plane, CppRaster(w, h)).first;
        if (it->second.coords().empty()) throw DegenerateData("CPP raster has an empty valid mask");
    }
    return it->second;
}

const SphereSampler& SequenceEvaluator::cpp_sampler(PlaneId plane, int w, int h) {
    const auto key = std::tuple{plane, w, h};
    auto it = cpp_samplers_.find(key);
    if (it == cpp_samplers_.end()) it = cpp_samplers_.emplace(key, cpp_raster(plane).sampler_for(w, h)).first;
    return it->second;
}

double SequenceEvaluator::score(MetricKind m, PlaneId plane, const Plane& ref, const Plane& test) {
    switch (m) {
        case MetricKind::PSNR: return psnr_frame(ref, test);
        case MetricKind::WS_PSNR: return ws_psnr_frame(ref, test);
        case MetricKind::SPSNR_NN:
            return psnr_from_mse(nearest_mse(ref, sphere_sampler(ref.width, ref.height), test,
                                             sphere_sampler(test.width, test.height)));
        case MetricKind::SPSNR_I:
            return psnr_from_mse(bicubic_mse(ref, sphere_sampler(ref.width, ref.height), test,
                                             sphere_sampler(test.width, test.height)));
        case MetricKind::CPP_PSNR: {
            const auto& rs = cpp_sampler(plane, ref.width, ref.height);
            const auto& ts = cpp_sampler(plane, test.width, test.height);
            return psnr_from_mse(cfg_.cpp_bicubic ? bicubic_mse(ref, rs, test, ts) : nearest_mse(ref, rs, test, ts));
        }
    }
    return std::numeric_limits<double>::quiet_NaN();
}

void SequenceEvaluator::add_frame(const Frame& ref, const Frame& test) {
    const auto& m = report_.meta;
    if (ref.width() != m.ref_width || ref.height() != m.ref_height || test.width() != m.test_width ||
        test.height() != m.test_height) {
        throw InvalidArgument("frame dimensions differ from the declared sequence sizes");
    }
    const bool same = m.ref_width == m.test_width && m.ref_height == m.test_height;
    std::optional<Frame> codec_ref;
    std::optional<Frame> e2e_test;

    std::size_t slot = 0;
    for (const auto& mp : pairs_) {
        const Frame* r = &ref;
        const Frame* t = &test;
        if (mp.phase == Phase::Codec && !same) {
            if (!codec_ref) codec_ref = resample_frame(ref, m.test_width, m.test_height, cfg_.reference_filter);
            r = &*codec_ref;
        } else if (mp.phase == Phase::EndToEnd && !same) {
            if (!e2e_test) e2e_test = resample_frame(test, m.ref_width, m.ref_height, cfg_.reconstruction_filter);
            t = &*e2e_test;
        }
        for (PlaneId pl : cfg_.planes) {
            report_.scores[slot++].frames.push_back(score(mp.metric, pl, r->plane(pl), t->plane(pl)));
        }
    }
    ++report_.meta.frames;
}

void SequenceEvaluator::add_warning(std::string w) { report_.meta.warnings.push_back(std::move(w)); }

SequenceReport SequenceEvaluator::finish() && {
    std::size_t capped = 0;
    for (auto& s : report_.scores) {
        s.average = capped_mean(s.frames, cfg_.psnr_cap_db);
        capped += std::size_t(std::count_if(s.frames.begin(), s.frames.end(),
                                            [&](double v) { return v > cfg_.psnr_cap_db; }));
    }
    if (capped > 0) {
        report_.meta.warnings.push_back(std::to_string(capped) + " frame score(s) above the " +
                                        std::to_string(int(cfg_.psnr_cap_db)) + " dB cap were capped for averaging");
    }
    return std::move(report_);
}

SequenceReport evaluate_sequence(const std::vector<Frame>& ref, const std::vector<Frame>& test,
                                 const std::vector<MetricPhase>& pairs, const MetricConfig& cfg) {
    if (ref.empty() || test.empty()) throw InvalidArgument("empty video sequence");
    SequenceEvaluator ev(ref.front().width(), ref.front().height(), test.front().width(), test.front().height(),
                         pairs, cfg);
    const std::size_t n = std::min(ref.size(), test.size());
    if (ref.size() != test.size()) {
        ev.add_warning("frame count mismatch (" + std::to_string(ref.size()) + " vs " + std::to_string(test.size()) +
                       "); compared the first " + std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) ev.add_frame(ref[i], test[i]);
    return std::move(ev).finish();
}

SequenceReport evaluate_sequence(const std::vector<Frame>& ref, const std::vector<Frame>& test,
                                 const std::vector<Phase>& phases, const std::vector<MetricKind>& metrics,
                                 const MetricConfig& cfg) {
    return evaluate_sequence(ref, test, select_pairs(phases, metrics), cfg);
}

}  // namespace oriq
