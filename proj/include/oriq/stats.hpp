#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace oriq {

enum class Modality { A, V, AV };

std::string_view to_string(Modality m);
Modality parse_modality(std::string_view s);

struct ScoreScale {
    double min = 1.0;
    double max = 5.0;
};

struct ScoreRecord {
    std::string assessor_id;
    std::string content_id;
    std::string condition_id;
    Modality modality = Modality::V;
    double score = 0.0;
};

struct MosPoint {
    std::string content_id;
    std::string condition_id;
    Modality modality = Modality::V;
    double mean = 0.0;
    double ci95 = 0.0;  // Student-t half-width
    std::size_t n = 0;
    bool wide_ci = false;  // half-width exceeds half the scale range
};

/// Two-sided Student-t quantile, e.g. p = 0.975.
double student_t_quantile(double p, double dof);

/// Mean and 95% CI per (content, condition, modality), sorted by that key.
/// Throws InvalidArgument for out-of-scale scores and groups with n < 2.
std::vector<MosPoint> mos_aggregate(std::span<const ScoreRecord> records, ScoreScale scale = {});

/// Product-moment correlation. Throws InvalidArgument on length mismatch or
/// fewer than 3 values, DegenerateData on zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// 1-based ranks with ties replaced by the mean of the ranks they cover.
std::vector<double> average_ranks(std::span<const double> v);

double spearman(std::span<const double> x, std::span<const double> y);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line y = slope * x + intercept.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// RMSE of `mos` against the best first-order linear map of `metric`.
double rmse_mapped(std::span<const double> metric, std::span<const double> mos);

/// Raw root-mean-square difference.
double rmse(std::span<const double> a, std::span<const double> b);

struct MetricRow {
    std::string content_id;
    std::string condition_id;
    std::string metric;
    std::string phase;
    double value = 0.0;
};

struct CorrelationRow {
    std::string metric;
    std::string phase;
    std::string content_id;  // empty for the pooled row
    std::size_t n = 0;
    double pcc = 0.0;
    double srocc = 0.0;
    double rmse = 0.0;
};

struct CorrelationReport {
    std::string modality;
    std::vector<CorrelationRow> rows;         // pooled over all joined conditions
    std::vector<CorrelationRow> per_content;  // optional breakdown
    std::vector<std::string> warnings;
};

/// Joins metric rows with MOS on (content_id, condition_id) and reports one
/// pooled row per (metric, phase), sorted by that key.
CorrelationReport correlate_metrics_mos(std::span<const MetricRow> metrics, std::span<const MosPoint> mos,
                                        bool per_content = false);

std::vector<ScoreRecord> read_scores_csv(const std::filesystem::path& path, ScoreScale scale = {});
std::vector<MetricRow> read_metrics_csv(const std::filesystem::path& path);

nlohmann::json to_json(const CorrelationReport& r);
std::string to_csv(const CorrelationReport& r);

nlohmann::json to_json(std::span<const MosPoint> mos);

}  // namespace oriq
