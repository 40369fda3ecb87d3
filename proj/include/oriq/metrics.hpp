#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "oriq/sphere_geom.hpp"
#include "oriq/yuv_io.hpp"

namespace oriq {

enum class MetricKind { PSNR, WS_PSNR, SPSNR_NN, SPSNR_I, CPP_PSNR };
enum class Phase { Codec, CrossFormat, EndToEnd };

inline constexpr MetricKind kAllMetrics[] = {MetricKind::PSNR, MetricKind::WS_PSNR, MetricKind::SPSNR_NN,
                                             MetricKind::SPSNR_I, MetricKind::CPP_PSNR};
inline constexpr Phase kAllPhases[] = {Phase::Codec, Phase::CrossFormat, Phase::EndToEnd};

std::string_view to_string(MetricKind m);
std::string_view to_string(Phase p);
MetricKind parse_metric(std::string_view s);
Phase parse_phase(std::string_view s);

struct MetricPhase {
    MetricKind metric;
    Phase phase;
    friend auto operator<=>(const MetricPhase&, const MetricPhase&) = default;
};

/// The nine (metric, phase) pairs reported per sequence:
/// codec {PSNR, WS-PSNR}, cross-format {S-PSNR-NN, S-PSNR-I, CPP-PSNR},
/// end-to-end {S-PSNR-NN, S-PSNR-I, CPP-PSNR, WS-PSNR}.
const std::vector<MetricPhase>& standard_pairs();

struct MetricConfig {
    std::size_t sphere_points = SpherePointSet::kDefaultCount;
    int cpp_width = 0;   // 0: luma width of the source (reference) video
    int cpp_height = 0;  // 0: luma height of the source video
    ResampleFilter reference_filter = ResampleFilter::Lanczos3;       // codec phase
    ResampleFilter reconstruction_filter = ResampleFilter::Lanczos3;  // end-to-end phase
    bool cpp_bicubic = false;
    double psnr_cap_db = 100.0;
    std::vector<PlaneId> planes{PlaneId::Y};

    void validate() const;
};

struct SseResult {
    std::uint64_t sse = 0;
    std::uint64_t count = 0;
};

SseResult sse_plane(const Plane& ref, const Plane& test);

/// 10 log10(255^2 / mse); +infinity when mse == 0.
double psnr_from_mse(double mse);

double psnr_frame(const Plane& ref, const Plane& test);

/// Per-row ERP area weights cos((j + 0.5 - H/2) pi / H).
std::vector<double> ws_weights(int height);
double ws_psnr_frame(const Plane& ref, const Plane& test);

double spsnr_nn_frame(const Plane& ref, const Plane& test, const SpherePointSet& pts);
double spsnr_i_frame(const Plane& ref, const Plane& test, const SpherePointSet& pts);
double cpp_psnr_frame(const Plane& ref, const Plane& test, const MetricConfig& cfg);

/// Sphere points projected onto one ERP raster size.
class SphereSampler {
public:
    SphereSampler(std::span<const SphericalCoord> coords, int width, int height);
    SphereSampler(const SpherePointSet& pts, int width, int height);

    std::size_t size() const { return nearest_.size(); }

    const std::vector<std::uint32_t>& nearest() const { return nearest_; }
    const std::vector<PixelPos>& positions() const { return positions_; }

private:
    std::vector<std::uint32_t> nearest_;
    std::vector<PixelPos> positions_;
};

/// Valid pixels of a CPP raster and their spherical coordinates.
class CppRaster {
public:
    CppRaster(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }
    const std::vector<std::uint8_t>& mask() const { return mask_; }
    const std::vector<SphericalCoord>& coords() const { return coords_; }

    /// ERP positions of every valid CPP pixel for a source of the given size.
    SphereSampler sampler_for(int erp_width, int erp_height) const;

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> mask_;
    std::vector<SphericalCoord> coords_;
};

/// Gathered squared error between two samplers over the same point list.
double nearest_mse(const Plane& ref, const SphereSampler& rs, const Plane& test, const SphereSampler& ts);
double bicubic_mse(const Plane& ref, const SphereSampler& rs, const Plane& test, const SphereSampler& ts);

struct ScoreSeries {
    MetricKind metric;
    Phase phase;
    PlaneId plane;
    std::vector<double> frames;  // raw dB, +inf for identical content
    double average = 0.0;        // mean of per-frame values capped at psnr_cap_db
};

struct ReportMeta {
    int ref_width = 0;
    int ref_height = 0;
    int test_width = 0;
    int test_height = 0;
    std::size_t frames = 0;
    MetricConfig config;
    std::vector<std::string> notes;
    std::vector<std::string> warnings;
};

struct SequenceReport {
    ReportMeta meta;
    std::vector<ScoreSeries> scores;

    const ScoreSeries* find(MetricKind m, Phase p, PlaneId plane = PlaneId::Y) const;
};

/// Mean of per-frame dB values, each capped at `cap`.
double capped_mean(const std::vector<double>& frames, double cap);

/// Frame-at-a-time evaluation; keeps geometry tables between frames.
class SequenceEvaluator {
public:
    SequenceEvaluator(int ref_width, int ref_height, int test_width, int test_height,
                      std::vector<MetricPhase> pairs, MetricConfig cfg);
    ~SequenceEvaluator();
    SequenceEvaluator(const SequenceEvaluator&) = delete;
    SequenceEvaluator& operator=(const SequenceEvaluator&) = delete;

    void add_frame(const Frame& ref, const Frame& test);
    void add_warning(std::string w);
    SequenceReport finish() &&;

private:
    const SphereSampler& sphere_sampler(int w, int h);
    const SphereSampler& cpp_sampler(PlaneId plane, int w, int h);
    const CppRaster& cpp_raster(PlaneId plane);
    double score(MetricKind m, PlaneId plane, const Plane& ref, const Plane& test);

    std::vector<MetricPhase> pairs_;
    MetricConfig cfg_;
    SequenceReport report_;
    std::unique_ptr<SpherePointSet> points_;
    std::map<std::pair<int, int>, SphereSampler> sphere_samplers_;
    std::map<PlaneId, CppRaster> cpp_rasters_;
    std::map<std::tuple<PlaneId, int, int>, SphereSampler> cpp_samplers_;
};

/// Evaluates explicit (metric, phase) pairs. Plane-domain metrics in the
/// cross-format phase require equal resolutions.
SequenceReport evaluate_sequence(const std::vector<Frame>& ref, const std::vector<Frame>& test,
                                 const std::vector<MetricPhase>& pairs, const MetricConfig& cfg);

/// Evaluates the standard pairs restricted to the given phases and metrics.
SequenceReport evaluate_sequence(const std::vector<Frame>& ref, const std::vector<Frame>& test,
                                 const std::vector<Phase>& phases, const std::vector<MetricKind>& metrics,
                                 const MetricConfig& cfg);

std::vector<MetricPhase> select_pairs(const std::vector<Phase>& phases, const std::vector<MetricKind>& metrics);

}  // namespace oriq
