#include "oriq/avmodels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "oriq/csv.hpp"
#include "oriq/error.hpp"
#include "oriq/random.hpp"
#include "oriq/report_io.hpp"

namespace oriq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Least squares via column-pivoted QR; empty when X is rank deficient.
std::optional<VectorXd> least_squares(const MatrixXd& x, const VectorXd& y) {
    Eigen::ColPivHouseholderQR<MatrixXd> qr(x);
    if (qr.rank() < x.cols()) return std::nullopt;
    return VectorXd(qr.solve(y));
}

void require_positive(std::span<const AvSample> s, ModelForm f) {
    for (const auto& x : s) {
        if (!(x.mos_a > 0.0) || !(x.mos_v > 0.0) || !(x.mos_av > 0.0)) {
            throw InvalidArgument(std::string(to_string(f)) + " needs positive MOS values (sample " + x.content_id +
                                  "/" + x.condition_id + ")");
        }
    }
}

VectorXd targets(std::span<const AvSample> s) {
    VectorXd y(Eigen::Index(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) y[Eigen::Index(i)] = s[i].mos_av;
    return y;
}

// Regressor columns of the linear forms, intercept first.
MatrixXd linear_design(ModelForm f, std::span<const AvSample> s) {
    const Eigen::Index n = Eigen::Index(s.size());
    const Eigen::Index cols = Eigen::Index(parameter_count(f));
    MatrixXd x(n, cols);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = s[std::size_t(i)].mos_a;
        const double v = s[std::size_t(i)].mos_v;
        x(i, 0) = 1.0;
        switch (f) {
            case ModelForm::M1: x(i, 1) = a; x(i, 2) = v; x(i, 3) = a * v; break;
            case ModelForm::M2: x(i, 1) = a * v; break;
            case ModelForm::M3: x(i, 1) = v; x(i, 2) = a * v; break;
            case ModelForm::M4: x(i, 1) = a; x(i, 2) = v; break;
            default: break;
        }
    }
    return x;
}

struct MinkowskiFit {
    double loss = kInf;
    double p = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
};

MinkowskiFit fit_minkowski_at(std::span<const AvSample> s, double p) {
    const Eigen::Index n = Eigen::Index(s.size());
    MatrixXd x(n, 2);
    VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = s[std::size_t(i)];
        x(i, 0) = std::pow(r.mos_a, p);
        x(i, 1) = std::pow(r.mos_v, p);
        y[i] = std::pow(r.mos_av, p);
    }
    const auto beta = least_squares(x, y);
    MinkowskiFit out;
    out.p = p;
    if (!beta) return out;
    out.a1 = (*beta)[0];
    out.a2 = (*beta)[1];
    double loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double inner = out.a1 * x(i, 0) + out.a2 * x(i, 1);
        if (!(inner > 0.0)) return {kInf, p, out.a1, out.a2};
        const double e = std::pow(inner, 1.0 / p) - s[std::size_t(i)].mos_av;
        loss += e * e;
    }
    out.loss = loss;
    return out;
}

struct PowerFit {
    double loss = kInf;
    double p1 = 0.0;
    double p2 = 0.0;
    double a0 = 0.0;
    double a1 = 0.0;
};

PowerFit fit_power_at(std::span<const AvSample> s, double p1, double p2) {
    const Eigen::Index n = Eigen::Index(s.size());
    MatrixXd x(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = s[std::size_t(i)];
        x(i, 0) = 1.0;
        x(i, 1) = std::pow(r.mos_a, p1) * std::pow(r.mos_v, p2);
    }
    const VectorXd y = targets(s);
    const auto beta = least_squares(x, y);
    PowerFit out{kInf, p1, p2, 0.0, 0.0};
    if (!beta) return out;
    out.a0 = (*beta)[0];
    out.a1 = (*beta)[1];
    out.loss = (x * *beta - y).squaredNorm();
    return out;
}

// Total order for grid winners: loss, then exponents lexicographically.
bool better(const PowerFit& a, const PowerFit& b) {
    if (a.loss != b.loss) return a.loss < b.loss;
    if (a.p1 != b.p1) return a.p1 < b.p1;
    return a.p2 < b.p2;
}

FittedModel fit_minkowski(std::span<const AvSample> train, const ExponentSearch& search) {
    if (search.p_grid < 2 || !(search.p_min > 0.0) || !(search.p_max > search.p_min)) {
        throw InvalidArgument("invalid Minkowski exponent search box");
    }
    const double lo = std::log(search.p_min);
    const double hi = std::log(search.p_max);
    std::vector<MinkowskiFit> grid(std::size_t(search.p_grid));
    auto log_p = [&](int k) { return lo + (hi - lo) * double(k) / double(search.p_grid - 1); };
#pragma omp parallel for schedule(static)
    for (int k = 0; k < search.p_grid; ++k) grid[std::size_t(k)] = fit_minkowski_at(train, std::exp(log_p(k)));

    int win = 0;
    for (int k = 1; k < search.p_grid; ++k) {
        if (grid[std::size_t(k)].loss < grid[std::size_t(win)].loss) win = k;
    }
    MinkowskiFit best = grid[std::size_t(win)];
    if (!std::isfinite(best.loss)) throw DegenerateData("M5: no exponent on the grid yields a valid fit");

    // golden-section search in log P over the neighbouring grid cells
    double a = log_p(std::max(0, win - 1));
    double b = log_p(std::min(search.p_grid - 1, win + 1));
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    MinkowskiFit fc = fit_minkowski_at(train, std::exp(c));
    MinkowskiFit fd = fit_minkowski_at(train, std::exp(d));
    for (int it = 0; it < 200 && (b - a) > search.golden_tol; ++it) {
        if (fc.loss <= fd.loss) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = fit_minkowski_at(train, std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = fit_minkowski_at(train, std::exp(d));
        }
    }
    for (const auto& f : {fc, fd}) {
        if (f.loss < best.loss) best = f;
    }

    FittedModel m;
    m.form = ModelForm::M5;
    m.alpha[1] = best.a1;
    m.alpha[2] = best.a2;
    m.p = best.p;
    return m;
}

FittedModel fit_power(std::span<const AvSample> train, const ExponentSearch& search) {
    if (search.pair_lo < 1 || search.pair_hi <= search.pair_lo) throw InvalidArgument("invalid power exponent box");
    const int steps = search.pair_hi - search.pair_lo + 1;
    auto exponent = [&](int k) { return double(search.pair_lo + k) / 20.0; };
    std::vector<PowerFit> grid(std::size_t(steps) * std::size_t(steps));
#pragma omp parallel for schedule(static)
    for (int cell = 0; cell < steps * steps; ++cell) {
        grid[std::size_t(cell)] = fit_power_at(train, exponent(cell / steps), exponent(cell % steps));
    }
    PowerFit best = grid.front();
    for (const auto& g : grid) {
        if (better(g, best)) best = g;
    }
    if (!std::isfinite(best.loss)) throw DegenerateData("M6: no exponent pair on the grid yields a valid fit");

    // coordinate descent with step halving, kept inside the box
    const double box_lo = exponent(0);
    const double box_hi = exponent(steps - 1);
    double step = 1.0 / 20.0;
    int guard = 0;
    while (step >= search.cd_min_step && guard++ < 10000) {
        bool moved = false;
        for (int coord = 0; coord < 2; ++coord) {
            for (double dir : {1.0, -1.0}) {
                double p1 = best.p1;
                double p2 = best.p2;
                (coord == 0 ? p1 : p2) += dir * step;
                if (p1 < box_lo || p1 > box_hi || p2 < box_lo || p2 > box_hi) continue;
                const auto cand = fit_power_at(train, p1, p2);
                if (cand.loss < best.loss) {
                    best = cand;
                    moved = true;
                }
            }
        }
        if (!moved) step /= 2.0;
    }

    FittedModel m;
    m.form = ModelForm::M6;
    m.alpha[0] = best.a0;
    m.alpha[1] = best.a1;
    m.p1 = best.p1;
    m.p2 = best.p2;
    return m;
}

std::optional<double> safe_corr(double (*fn)(std::span<const double>, std::span<const double>),
                                std::span<const double> x, std::span<const double> y) {
    if (x.size() < 3) return std::nullopt;
    try {
        return fn(x, y);
    } catch (const DegenerateData&) {
        return std::nullopt;
    }
}

nlohmann::json stats_json(const AccuracyStats& s) {
    return {{"n", s.n},
            {"pcc", s.pcc ? nlohmann::json(*s.pcc) : nlohmann::json(nullptr)},
            {"srocc", s.srocc ? nlohmann::json(*s.srocc) : nlohmann::json(nullptr)},
            {"rmse", s.rmse}};
}

}  // namespace

std::string_view to_string(ModelForm f) {
    constexpr std::string_view names[] = {"M1", "M2", "M3", "M4", "M5", "M6"};
    return names[int(f)];
}

std::string_view equation(ModelForm f) {
    switch (f) {
        case ModelForm::M1: return "a0 + a1*A + a2*V + a3*A*V";
        case ModelForm::M2: return "a0 + a1*A*V";
        case ModelForm::M3: return "a0 + a1*V + a2*A*V";
        case ModelForm::M4: return "a0 + a1*A + a2*V";
        case ModelForm::M5: return "(a1*A^P + a2*V^P)^(1/P)";
        case ModelForm::M6: return "a0 + a1*A^P1*V^P2";
    }
    return "?";
}

ModelForm parse_form(std::string_view s) {
    for (auto f : kAllForms) {
        const auto n = to_string(f);
        if (s == n || (s.size() == 2 && s[0] == 'm' && s[1] == n[1])) return f;
    }
    throw InvalidArgument("unknown model '" + std::string(s) + "' (expected m1..m6 or all)");
}

std::size_t parameter_count(ModelForm f) {
    switch (f) {
        case ModelForm::M1: return 4;
        case ModelForm::M2: return 2;
        case ModelForm::M3: return 3;
        case ModelForm::M4: return 3;
        case ModelForm::M5: return 3;
        case ModelForm::M6: return 4;
    }
    return 0;
}

std::pair<std::vector<AvSample>, std::vector<AvSample>> split_train_test(std::span<const AvSample> samples,
                                                                         double ratio, std::uint64_t seed,
                                                                         bool stratify) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidArgument("split ratio must lie in (0, 1)");
    const std::size_t n = samples.size();
    if (n < 5) throw InvalidArgument("train/test split needs at least 5 samples");
    const std::size_t n_train = std::size_t(std::ceil(ratio * double(n) - 1e-9));
    if (n_train == 0 || n_train >= n) throw InvalidArgument("split ratio leaves an empty train or test set");

    Rng rng(seed);
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;
    if (!stratify) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        train_idx.assign(order.begin(), order.begin() + std::ptrdiff_t(n_train));
        test_idx.assign(order.begin() + std::ptrdiff_t(n_train), order.end());
    } else {
        std::map<std::string, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < n; ++i) groups[samples[i].content_id].push_back(i);
        struct Quota {
            std::vector<std::size_t>* members;
            std::size_t take;
            double frac;
            std::size_t order;
        };
        std::vector<Quota> quotas;
        std::size_t assigned = 0;
        for (auto& [content, idx] : groups) {
            rng.shuffle(idx);
            const double want = ratio * double(idx.size());
            const auto take = std::size_t(std::floor(want));
            quotas.push_back({&idx, take, want - double(take), quotas.size()});
            assigned += take;
        }
        std::vector<Quota*> by_frac;
        for (auto& q : quotas) by_frac.push_back(&q);
        std::stable_sort(by_frac.begin(), by_frac.end(), [](const Quota* a, const Quota* b) { return a->frac > b->frac; });
        for (std::size_t k = 0; assigned < n_train && k < by_frac.size(); ++k) {
            if (by_frac[k]->take < by_frac[k]->members->size()) {
                ++by_frac[k]->take;
                ++assigned;
            }
        }
        for (const auto& q : quotas) {
            for (std::size_t k = 0; k < q.members->size(); ++k) {
                (k < q.take ? train_idx : test_idx).push_back((*q.members)[k]);
            }
        }
        if (train_idx.empty() || test_idx.empty()) throw InvalidArgument("stratified split left an empty side");
    }
    std::pair<std::vector<AvSample>, std::vector<AvSample>> out;
    for (auto i : train_idx) out.first.push_back(samples[i]);
    for (auto i : test_idx) out.second.push_back(samples[i]);
    return out;
}

FittedModel fit_model(ModelForm form, std::span<const AvSample> train, const ExponentSearch& search) {
    if (train.size() < parameter_count(form) + 1) {
        throw InvalidArgument(std::string(to_string(form)) + " needs at least " +
                              std::to_string(parameter_count(form) + 1) + " training samples");
    }
    FittedModel m;
    if (form == ModelForm::M5 || form == ModelForm::M6) {
        require_positive(train, form);
        m = form == ModelForm::M5 ? fit_minkowski(train, search) : fit_power(train, search);
    } else {
        const auto beta = least_squares(linear_design(form, train), targets(train));
        if (!beta) throw DegenerateData(std::string(to_string(form)) + ": rank-deficient regressor matrix");
        m.form = form;
        for (Eigen::Index k = 0; k < beta->size(); ++k) m.alpha[std::size_t(k)] = (*beta)[k];
    }
    m.train_stats = evaluate_model(m, train);
    return m;
}

double predict(const FittedModel& m, double a, double v) {
    auto al = [&](std::size_t k) { return m.alpha[k].value_or(0.0); };
    switch (m.form) {
        case ModelForm::M1: return al(0) + al(1) * a + al(2) * v + al(3) * a * v;
        case ModelForm::M2: return al(0) + al(1) * a * v;
        case ModelForm::M3: return al(0) + al(1) * v + al(2) * a * v;
        case ModelForm::M4: return al(0) + al(1) * a + al(2) * v;
        case ModelForm::M5:
        case ModelForm::M6:
            if (!(a > 0.0) || !(v > 0.0)) throw InvalidArgument("exponent models need positive MOS inputs");
            if (m.form == ModelForm::M5) {
                const double p = m.p.value();
                return std::pow(al(1) * std::pow(a, p) + al(2) * std::pow(v, p), 1.0 / p);
            }
            return al(0) + al(1) * std::pow(a, m.p1.value()) * std::pow(v, m.p2.value());
    }
    return std::numeric_limits<double>::quiet_NaN();
}

AccuracyStats evaluate_model(const FittedModel& model, std::span<const AvSample> test) {
    if (test.empty()) throw InvalidArgument("evaluation set is empty");
    std::vector<double> pred;
    std::vector<double> obs;
    for (const auto& s : test) {
        pred.push_back(predict(model, s.mos_a, s.mos_v));
        obs.push_back(s.mos_av);
    }
    AccuracyStats st;
    st.n = test.size();
    st.pcc = safe_corr(&pearson, pred, obs);
    st.srocc = safe_corr(&spearman, pred, obs);
    st.rmse = rmse(pred, obs);
    return st;
}

SubjectiveCorrelationTable subjective_correlation_table(std::span<const AvSample> samples) {
    SubjectiveCorrelationTable t;
    std::vector<std::pair<std::string, std::vector<const AvSample*>>> groups;
    groups.push_back({"All", {}});
    std::map<std::string, std::size_t> index;
    for (const auto& s : samples) {
        groups.front().second.push_back(&s);
        auto [it, fresh] = index.emplace(s.content_id, groups.size());
        if (fresh) groups.push_back({s.content_id, {}});
        groups[it->second].second.push_back(&s);
    }
    if (samples.size() < 3) throw InvalidArgument("subjective correlation table needs at least 3 samples");
    for (const auto& [name, members] : groups) {
        if (members.size() < 3) {
            t.warnings.push_back("content '" + name + "' has fewer than 3 samples; column omitted");
            continue;
        }
        std::vector<double> a, v, av, prod;
        for (const auto* s : members) {
            a.push_back(s->mos_a);
            v.push_back(s->mos_v);
            prod.push_back(s->mos_a * s->mos_v);
            av.push_back(s->mos_av);
        }
        t.columns.push_back(name);
        t.rows[0].push_back(safe_corr(&pearson, a, av));
        t.rows[1].push_back(safe_corr(&pearson, v, av));
        t.rows[2].push_back(safe_corr(&pearson, prod, av));
        for (std::size_t r = 0; r < 3; ++r) {
            if (!t.rows[r].back()) {
                t.warnings.push_back(std::string(SubjectiveCorrelationTable::kRowNames[r]) + " correlation undefined for '" +
                                     name + "' (zero variance)");
            }
        }
    }
    return t;
}

nlohmann::json to_json(const FittedModel& m) {
    nlohmann::json coeffs = nlohmann::json::object();
    for (std::size_t k = 0; k < 4; ++k) {
        if (m.alpha[k]) coeffs["alpha" + std::to_string(k)] = *m.alpha[k];
    }
    nlohmann::json exps = nlohmann::json::object();
    if (m.p) exps["P"] = *m.p;
    if (m.p1) exps["P1"] = *m.p1;
    if (m.p2) exps["P2"] = *m.p2;
    nlohmann::json j = {{"model", std::string(to_string(m.form))},
                        {"equation", std::string(equation(m.form))},
                        {"coefficients", coeffs},
                        {"exponents", exps},
                        {"train", stats_json(m.train_stats)}};
    if (m.test_stats) j["test"] = stats_json(*m.test_stats);
    return j;
}

nlohmann::json to_json(const SubjectiveCorrelationTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < 3; ++r) {
        nlohmann::json cells = nlohmann::json::object();
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            cells[t.columns[c]] = t.rows[r][c] ? nlohmann::json(*t.rows[r][c]) : nlohmann::json(nullptr);
        }
        rows.push_back({{"predictor", std::string(SubjectiveCorrelationTable::kRowNames[r])}, {"pcc", cells}});
    }
    return {{"columns", t.columns}, {"rows", rows}, {"warnings", t.warnings}};
}

nlohmann::json run_fit(std::span<const AvSample> samples, const FitRequest& req) {
    if (req.forms.empty()) throw InvalidArgument("no model forms requested");
    if (req.repeats < 1) throw InvalidArgument("repeats must be >= 1");
    const auto [train, test] = split_train_test(samples, req.ratio, req.seed, req.stratify);

    nlohmann::json models = nlohmann::json::array();
    for (auto f : req.forms) {
        auto m = fit_model(f, train, req.search);
        m.test_stats = evaluate_model(m, test);
        m.split = SplitInfo{req.ratio, req.seed, req.stratify};
        models.push_back(to_json(m));
    }

    nlohmann::json out = {
        {"meta",
         {{"samples", samples.size()},
          {"split", {{"ratio", req.ratio}, {"seed", req.seed}, {"stratified", req.stratify}}},
          {"n_train", train.size()},
          {"n_test", test.size()},
          {"notes", {"alpha0 shifts predictions only and does not affect PCC or SROCC",
                     "test RMSE is computed on raw predictions (no remapping)"}}}},
        {"subjective_correlation", to_json(subjective_correlation_table(samples))},
        {"models", models},
    };

    if (req.repeats > 1) {
        nlohmann::json rep = nlohmann::json::array();
        for (auto f : req.forms) {
            std::array<std::vector<double>, 3> vals;  // pcc, srocc, rmse
            for (int r = 0; r < req.repeats; ++r) {
                const auto [tr, te] = split_train_test(samples, req.ratio, req.seed + std::uint64_t(r), req.stratify);
                const auto st = evaluate_model(fit_model(f, tr, req.search), te);
                if (st.pcc) vals[0].push_back(*st.pcc);
                if (st.srocc) vals[1].push_back(*st.srocc);
                vals[2].push_back(st.rmse);
            }
            auto summary = [](const std::vector<double>& v) -> nlohmann::json {
                if (v.empty()) return nullptr;
                const double mean = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
                double ss = 0.0;
                for (double x : v) ss += (x - mean) * (x - mean);
                const double sd = v.size() > 1 ? std::sqrt(ss / double(v.size() - 1)) : 0.0;
                return {{"mean", mean}, {"sd", sd}, {"n", v.size()}};
            };
            rep.push_back({{"model", std::string(to_string(f))},
                           {"test_pcc", summary(vals[0])},
                           {"test_srocc", summary(vals[1])},
                           {"test_rmse", summary(vals[2])}});
        }
        out["repeated_splits"] = {{"repeats", req.repeats}, {"seeds_from", req.seed}, {"models", rep}};
    }
    return out;
}

std::vector<AvSample> read_av_samples_csv(const std::filesystem::path& path, ScoreScale scale) {
    const auto t = read_csv(path);
    const auto ic = t.column("content_id");
    const auto ik = t.column("condition_id");
    const auto ia = t.column("mos_a");
    const auto iv = t.column("mos_v");
    const auto iav = t.column("mos_av");
    std::vector<AvSample> out;
    for (const auto& r : t.rows) {
        AvSample s{r[ic], r[ik], parse_double(r[ia], "mos_a"), parse_double(r[iv], "mos_v"),
                   parse_double(r[iav], "mos_av")};
        for (double x : {s.mos_a, s.mos_v, s.mos_av}) {
            if (!(x >= scale.min && x <= scale.max) || !(x > 0.0)) {
                throw FormatError(t.source + ": MOS value " + std::to_string(x) + " for " + s.content_id + "/" +
                                  s.condition_id + " is outside the scale or not positive");
            }
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<AvSample> av_samples_from_mos(std::span<const MosPoint> mos) {
    using Key = std::pair<std::string, std::string>;
    std::map<Key, std::array<std::optional<double>, 3>> joined;
    for (const auto& m : mos) joined[{m.content_id, m.condition_id}][std::size_t(m.modality)] = m.mean;
    std::vector<AvSample> out;
    for (const auto& [key, v] : joined) {
        if (v[0] && v[1] && v[2]) out.push_back({key.first, key.second, *v[0], *v[1], *v[2]});
    }
    if (out.empty()) throw DegenerateData("no condition has A, V and AV scores");
    return out;
}

}  // namespace oriq
