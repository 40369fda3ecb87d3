#include "oriq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include <boost/math/distributions/students_t.hpp>

#include "oriq/csv.hpp"
#include "oriq/error.hpp"
#include "oriq/report_io.hpp"

namespace oriq {

std::string_view to_string(Modality m) {
    switch (m) {
        case Modality::A: return "A";
        case Modality::V: return "V";
        case Modality::AV: return "AV";
    }
    return "?";
}

Modality parse_modality(std::string_view s) {
    if (s == "A" || s == "a") return Modality::A;
    if (s == "V" || s == "v") return Modality::V;
    if (s == "AV" || s == "av") return Modality::AV;
    throw InvalidArgument("unknown modality '" + std::string(s) + "' (expected A, V or AV)");
}

double student_t_quantile(double p, double dof) {
    return boost::math::quantile(boost::math::students_t_distribution<double>(dof), p);
}

std::vector<MosPoint> mos_aggregate(std::span<const ScoreRecord> records, ScoreScale scale) {
    using Key = std::tuple<std::string, std::string, Modality>;
    std::map<Key, std::vector<double>> groups;
    for (const auto& r : records) {
        if (!(r.score >= scale.min && r.score <= scale.max)) {
            throw InvalidArgument("score " + std::to_string(r.score) + " from assessor '" + r.assessor_id +
                                  "' outside scale [" + std::to_string(scale.min) + ", " +
                                  std::to_string(scale.max) + "]");
        }
        groups[{r.content_id, r.condition_id, r.modality}].push_back(r.score);
    }
    std::vector<MosPoint> out;
    out.reserve(groups.size());
    for (auto& [key, scores] : groups) {
        const auto& [content, condition, modality] = key;
        const std::size_t n = scores.size();
        if (n < 2) {
            throw InvalidArgument("group (" + content + ", " + condition + ", " + std::string(to_string(modality)) +
                                  ") has fewer than 2 scores; confidence interval undefined");
        }
        // sorting makes the floating sums independent of record order
        std::sort(scores.begin(), scores.end());
        const double mean = std::accumulate(scores.begin(), scores.end(), 0.0) / double(n);
        double ss = 0.0;
        for (double s : scores) ss += (s - mean) * (s - mean);
        const double sd = std::sqrt(ss / double(n - 1));
        const double ci = student_t_quantile(0.975, double(n - 1)) * sd / std::sqrt(double(n));
        out.push_back({content, condition, modality, mean, ci, n, ci > 0.5 * (scale.max - scale.min)});
    }
    return out;
}

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InvalidArgument("correlation inputs differ in length");
    if (x.size() < 3) throw InvalidArgument("correlation needs at least 3 values");
}

double mean_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size()); }

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateData("correlation of a constant input is undefined");
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i + 1;
        while (j < order.size() && v[order[j]] == v[order[i]]) ++j;
        // positions i..j-1 hold ranks i+1..j
        const double r = 0.5 * double(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
        i = j;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("linear fit needs two equal-length inputs");
    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw DegenerateData("linear fit of a constant regressor is undefined");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

double rmse_mapped(std::span<const double> metric, std::span<const double> mos) {
    check_pair(metric, mos);
    const auto fit = fit_line(metric, mos);
    double ss = 0.0;
    for (std::size_t i = 0; i < metric.size(); ++i) {
        const double r = mos[i] - (fit.slope * metric[i] + fit.intercept);
        ss += r * r;
    }
    return std::sqrt(ss / double(metric.size()));
}

double rmse(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.empty()) throw InvalidArgument("rmse needs two equal-length non-empty inputs");
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(ss / double(a.size()));
}

CorrelationReport correlate_metrics_mos(std::span<const MetricRow> metrics, std::span<const MosPoint> mos,
                                        bool per_content) {
    using CondKey = std::pair<std::string, std::string>;
    std::map<CondKey, double> mos_by_cond;
    for (const auto& m : mos) {
        if (!mos_by_cond.emplace(CondKey{m.content_id, m.condition_id}, m.mean).second) {
            throw FormatError("duplicate MOS for (" + m.content_id + ", " + m.condition_id + ")");
        }
    }

    struct Joined {
        std::string content;
        double metric;
        double mos;
    };
    using MpKey = std::pair<std::string, std::string>;
    std::map<MpKey, std::map<CondKey, Joined>> groups;
    for (const auto& r : metrics) {
        const auto it = mos_by_cond.find({r.content_id, r.condition_id});
        if (it == mos_by_cond.end()) continue;
        auto& g = groups[{r.metric, r.phase}];
        if (!g.emplace(CondKey{r.content_id, r.condition_id}, Joined{r.content_id, r.value, it->second}).second) {
            throw FormatError("duplicate metric value for (" + r.content_id + ", " + r.condition_id + ", " +
                              r.metric + ", " + r.phase + ")");
        }
    }
    if (groups.empty()) throw DegenerateData("metric and MOS tables share no (content_id, condition_id)");

    CorrelationReport rep;
    auto row_for = [](const std::string& metric, const std::string& phase, const std::string& content,
                      const std::vector<double>& x, const std::vector<double>& y) {
        return CorrelationRow{metric, phase, content, x.size(), pearson(x, y), spearman(x, y), rmse_mapped(x, y)};
    };
    for (const auto& [mp, joined] : groups) {
        std::vector<double> x;
        std::vector<double> y;
        std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_content;
        for (const auto& [cond, j] : joined) {
            x.push_back(j.metric);
            y.push_back(j.mos);
            by_content[j.content].first.push_back(j.metric);
            by_content[j.content].second.push_back(j.mos);
        }
        try {
            rep.rows.push_back(row_for(mp.first, mp.second, "", x, y));
        } catch (const Error& e) {
            throw DegenerateData(mp.first + "/" + mp.second + ": " + e.what());
        }
        if (!per_content) continue;
        for (const auto& [content, xy] : by_content) {
            try {
                rep.per_content.push_back(row_for(mp.first, mp.second, content, xy.first, xy.second));
            } catch (const Error& e) {
                rep.warnings.push_back(mp.first + "/" + mp.second + " content '" + content + "' omitted: " + e.what());
            }
        }
    }
    return rep;
}

std::vector<ScoreRecord> read_scores_csv(const std::filesystem::path& path, ScoreScale scale) {
    const auto t = read_csv(path);
    const auto ia = t.column("assessor_id");
    const auto ic = t.column("content_id");
    const auto ik = t.column("condition_id");
    const auto im = t.column("modality");
    const auto is = t.column("score");
    std::vector<ScoreRecord> out;
    out.reserve(t.rows.size());
    for (const auto& r : t.rows) {
        Modality m;
        try {
            m = parse_modality(r[im]);
        } catch (const InvalidArgument& e) {
            throw FormatError(t.source + ": " + e.what());
        }
        const double s = parse_double(r[is], "score");
        if (!(s >= scale.min && s <= scale.max)) {
            throw FormatError(t.source + ": score " + r[is] + " outside scale [" + std::to_string(scale.min) + ", " +
                              std::to_string(scale.max) + "]");
        }
        out.push_back({r[ia], r[ic], r[ik], m, s});
    }
    return out;
}

std::vector<MetricRow> read_metrics_csv(const std::filesystem::path& path) {
    const auto t = read_csv(path);
    const auto ic = t.column("content_id");
    const auto ik = t.column("condition_id");
    const auto im = t.column("metric");
    const auto ip = t.column("phase");
    const auto iv = t.column("value");
    std::vector<MetricRow> out;
    out.reserve(t.rows.size());
    for (const auto& r : t.rows) out.push_back({r[ic], r[ik], r[im], r[ip], parse_double(r[iv], "metric value")});
    return out;
}

nlohmann::json to_json(const CorrelationReport& r) {
    auto rows = [](const std::vector<CorrelationRow>& v, bool with_content) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& row : v) {
            nlohmann::json j = {{"metric", row.metric}, {"phase", row.phase}};
            if (with_content) j["content_id"] = row.content_id;
            j["n"] = row.n;
            j["pcc"] = number_to_json(row.pcc);
            j["srocc"] = number_to_json(row.srocc);
            j["rmse"] = number_to_json(row.rmse);
            a.push_back(j);
        }
        return a;
    };
    nlohmann::json j = {
        {"meta", {{"modality", r.modality}, {"rmse_mapping", "first-order linear least squares"}}},
        {"rows", rows(r.rows, false)},
    };
    if (!r.per_content.empty()) j["per_content"] = rows(r.per_content, true);
    j["warnings"] = r.warnings;
    return j;
}

std::string to_csv(const CorrelationReport& r) {
    std::string s = "metric,phase,pcc,srocc,rmse\n";
    for (const auto& row : r.rows) {
        s += csv_escape(row.metric) + "," + csv_escape(row.phase) + "," + format_sig6(row.pcc) + "," +
             format_sig6(row.srocc) + "," + format_sig6(row.rmse) + "\n";
    }
    return s;
}

nlohmann::json to_json(std::span<const MosPoint> mos) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& m : mos) {
        a.push_back({{"content_id", m.content_id},
                     {"condition_id", m.condition_id},
                     {"modality", std::string(to_string(m.modality))},
                     {"mos", m.mean},
                     {"ci95", m.ci95},
                     {"n", m.n},
                     {"wide_ci", m.wide_ci}});
    }
    return a;
}

}  // namespace oriq
