#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "oriq/stats.hpp"

namespace oriq {

struct AvSample {
    std::string content_id;
    std::string condition_id;
    double mos_a = 0.0;
    double mos_v = 0.0;
    double mos_av = 0.0;
};

/// Audiovisual fusion forms, A = MOS_A, V = MOS_V:
///   M1  a0 + a1 A + a2 V + a3 A V
///   M2  a0 + a1 A V
///   M3  a0 + a1 V + a2 A V
///   M4  a0 + a1 A + a2 V
///   M5  (a1 A^P + a2 V^P)^(1/P)        weighted Minkowski
///   M6  a0 + a1 A^P1 V^P2               power
enum class ModelForm { M1, M2, M3, M4, M5, M6 };

inline constexpr ModelForm kAllForms[] = {ModelForm::M1, ModelForm::M2, ModelForm::M3,
                                          ModelForm::M4, ModelForm::M5, ModelForm::M6};

std::string_view to_string(ModelForm f);
std::string_view equation(ModelForm f);
ModelForm parse_form(std::string_view s);

/// Search box and schedule for the exponent forms.
struct ExponentSearch {
    double p_min = 0.1;  // M5, log-spaced grid
    double p_max = 10.0;
    int p_grid = 49;
    double golden_tol = 1e-9;  // final bracket width in log P
    int pair_lo = 2;           // M6 grid P1, P2 in {pair_lo/20 .. pair_hi/20}, i.e. [0.1, 3] step 0.05
    int pair_hi = 60;
    double cd_min_step = 1e-4;
};

struct AccuracyStats {
    std::size_t n = 0;
    std::optional<double> pcc;    // empty when undefined (constant input or n < 3)
    std::optional<double> srocc;
    double rmse = 0.0;
};

struct SplitInfo {
    double ratio = 0.8;
    std::uint64_t seed = 0;
    bool stratified = false;
};

struct FittedModel {
    ModelForm form = ModelForm::M1;
    std::array<std::optional<double>, 4> alpha{};  // only the form's own coefficients are set
    std::optional<double> p;                       // M5
    std::optional<double> p1;                      // M6
    std::optional<double> p2;                      // M6
    AccuracyStats train_stats;
    std::optional<AccuracyStats> test_stats;
    std::optional<SplitInfo> split;
};

/// Seeded shuffle, first ceil(ratio * n) samples train. With `stratify`,
/// every content keeps its train share within one sample of ratio * n_c.
std::pair<std::vector<AvSample>, std::vector<AvSample>> split_train_test(std::span<const AvSample> samples,
                                                                         double ratio, std::uint64_t seed,
                                                                         bool stratify = false);

/// Number of free parameters of a form.
std::size_t parameter_count(ModelForm f);

FittedModel fit_model(ModelForm form, std::span<const AvSample> train, const ExponentSearch& search = {});

/// Evaluates the closed form; no clamping. Exponent forms reject
/// nonpositive inputs with InvalidArgument.
double predict(const FittedModel& model, double mos_a, double mos_v);

AccuracyStats evaluate_model(const FittedModel& model, std::span<const AvSample> test);

/// Correlation of MOS_A, MOS_V and MOS_A*MOS_V with MOS_AV, overall and
/// per content.
struct SubjectiveCorrelationTable {
    std::vector<std::string> columns;  // "All" then content ids
    // rows: MOS_A, MOS_V, MOS_A*MOS_V; empty cells are undefined
    std::array<std::vector<std::optional<double>>, 3> rows;
    std::vector<std::string> warnings;

    static constexpr std::array<std::string_view, 3> kRowNames{"MOS_A", "MOS_V", "MOS_A*MOS_V"};
};

SubjectiveCorrelationTable subjective_correlation_table(std::span<const AvSample> samples);

/// Fits every requested form on one split (or `repeats` consecutive seeds)
/// and serializes coefficients plus train/test accuracy.
struct FitRequest {
    std::vector<ModelForm> forms{std::begin(kAllForms), std::end(kAllForms)};
    double ratio = 0.8;
    std::uint64_t seed = 42;
    bool stratify = false;
    int repeats = 1;
    ExponentSearch search;
};

nlohmann::json run_fit(std::span<const AvSample> samples, const FitRequest& req);

nlohmann::json to_json(const FittedModel& m);
nlohmann::json to_json(const SubjectiveCorrelationTable& t);

std::vector<AvSample> read_av_samples_csv(const std::filesystem::path& path, ScoreScale scale = {});

/// Joins A, V and AV MOS points on (content_id, condition_id).
std::vector<AvSample> av_samples_from_mos(std::span<const MosPoint> mos);

}  // namespace oriq
