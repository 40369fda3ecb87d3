#include <cmath>
#include <algorithm>
#include <map>
#include <set>

#include <Eigen/Dense>

#include "doctest.h"
#include "fixtures.hpp"
#include "oriq/avmodels.hpp"
#include "oriq/error.hpp"
#include "oriq/random.hpp"

using namespace oriq;

namespace {

std::vector<AvSample> grid_samples(double (*truth)(double, double)) {
    std::vector<AvSample> out;
    int k = 0;
    for (double a = 1.0; a <= 5.0; a += 0.5) {
        for (double v = 1.25; v <= 5.0; v += 0.75) {
            out.push_back({"c" + std::to_string(k % 3), "k" + std::to_string(k), a, v, truth(a, v)});
            ++k;
        }
    }
    return out;
}

double train_rmse(ModelForm f, const std::vector<AvSample>& s) { return fit_model(f, s).train_stats.rmse; }

}  // namespace

TEST_CASE("linear forms recover their generating coefficients") {
    const auto m4 = fit_model(ModelForm::M4, grid_samples([](double a, double v) { return 1 + 0.5 * a + 0.3 * v; }));
    CHECK(std::abs(*m4.alpha[0] - 1.0) < 1e-9);
    CHECK(std::abs(*m4.alpha[1] - 0.5) < 1e-9);
    CHECK(std::abs(*m4.alpha[2] - 0.3) < 1e-9);
    CHECK_FALSE(m4.alpha[3].has_value());
    CHECK(m4.train_stats.rmse < 1e-9);

    const auto m2 = fit_model(ModelForm::M2, grid_samples([](double a, double v) { return 0.2 + 0.18 * a * v; }));
    CHECK(std::abs(*m2.alpha[0] - 0.2) < 1e-9);
    CHECK(std::abs(*m2.alpha[1] - 0.18) < 1e-9);
    CHECK_FALSE(m2.alpha[2].has_value());

    const auto m1 = fit_model(ModelForm::M1,
                              grid_samples([](double a, double v) { return -0.4 + 0.1 * a + 0.2 * v + 0.15 * a * v; }));
    CHECK(std::abs(*m1.alpha[3] - 0.15) < 1e-9);
    const auto m3 = fit_model(ModelForm::M3, grid_samples([](double a, double v) { return 0.3 + 0.4 * v + 0.1 * a * v; }));
    CHECK(std::abs(*m3.alpha[1] - 0.4) < 1e-9);
    CHECK(std::abs(*m3.alpha[2] - 0.1) < 1e-9);
}

TEST_CASE("power form recovers on-grid exponents") {
    const auto s = grid_samples([](double a, double v) { return 0.5 + 0.2 * std::pow(a, 1.2) * std::pow(v, 0.8); });
    const auto m6 = fit_model(ModelForm::M6, s);
    CHECK(std::abs(*m6.p1 - 1.2) < 1e-2);
    CHECK(std::abs(*m6.p2 - 0.8) < 1e-2);
    CHECK(std::abs(*m6.alpha[0] - 0.5) < 1e-3);
    CHECK(std::abs(*m6.alpha[1] - 0.2) < 1e-3);
}

TEST_CASE("minkowski form") {
    const auto s = grid_samples([](double a, double v) { return std::pow(0.3 * a * a + 0.7 * v * v, 0.5); });
    const auto m5 = fit_model(ModelForm::M5, s);
    CHECK_FALSE(m5.alpha[0].has_value());
    CHECK(*m5.p == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(*m5.alpha[1] == doctest::Approx(0.3).epsilon(1e-4));
    CHECK(m5.train_stats.rmse < 1e-6);

    FittedModel half;
    half.form = ModelForm::M5;
    half.alpha[1] = 0.5;
    half.alpha[2] = 0.5;
    for (double p : {0.1, 0.7, 3.0, 9.5}) {
        half.p = p;
        for (double c : {1.0, 2.5, 4.75}) CHECK(predict(half, c, c) == doctest::Approx(c).epsilon(1e-12));
    }
    CHECK_THROWS_AS(predict(half, 0.0, 1.0), InvalidArgument);
}

TEST_CASE("prediction identities") {
    FittedModel m1;
    m1.form = ModelForm::M1;
    m1.alpha = {0.0, 0.0, 0.0, 1.0};
    CHECK(predict(m1, 2, 3) == 6.0);

    FittedModel m6;
    m6.form = ModelForm::M6;
    m6.alpha[0] = 0.3;
    m6.alpha[1] = 0.17;
    m6.p1 = 1.0;
    m6.p2 = 1.0;
    FittedModel m2;
    m2.form = ModelForm::M2;
    m2.alpha[0] = 0.3;
    m2.alpha[1] = 0.17;
    for (double a : {1.0, 2.2, 4.9}) {
        for (double v : {1.3, 3.0}) CHECK(predict(m6, a, v) == doctest::Approx(predict(m2, a, v)).epsilon(1e-15));
    }
}

TEST_CASE("least-squares residuals are orthogonal to the regressors") {
    const auto s = test::multiplicative_population(60, 9);
    for (auto f : {ModelForm::M1, ModelForm::M2, ModelForm::M3, ModelForm::M4}) {
        const auto m = fit_model(f, s);
        Eigen::MatrixXd x(Eigen::Index(s.size()), Eigen::Index(parameter_count(f)));
        Eigen::VectorXd r(Eigen::Index(s.size()));
        Eigen::VectorXd y(Eigen::Index(s.size()));
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double a = s[i].mos_a, v = s[i].mos_v;
            const auto row = Eigen::Index(i);
            x(row, 0) = 1.0;
            if (f == ModelForm::M1) x.row(row) << 1.0, a, v, a * v;
            if (f == ModelForm::M2) x.row(row) << 1.0, a * v;
            if (f == ModelForm::M3) x.row(row) << 1.0, v, a * v;
            if (f == ModelForm::M4) x.row(row) << 1.0, a, v;
            r[row] = s[i].mos_av - predict(m, a, v);
            y[row] = s[i].mos_av;
        }
        CHECK((x.transpose() * r).cwiseAbs().maxCoeff() <= 1e-8 * y.norm());
    }
}

TEST_CASE("nested dominance on training data") {
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        const auto s = test::multiplicative_population(50, seed, 0.3);
        const double r1 = train_rmse(ModelForm::M1, s);
        const double r2 = train_rmse(ModelForm::M2, s);
        CHECK(r1 <= r2 + 1e-12);
        CHECK(r1 <= train_rmse(ModelForm::M3, s) + 1e-12);
        CHECK(r1 <= train_rmse(ModelForm::M4, s) + 1e-12);
        CHECK(train_rmse(ModelForm::M6, s) <= r2 + 1e-12);
    }
}

TEST_CASE("linear forms are scale covariant") {
    auto s = test::multiplicative_population(40, 17);
    const auto base = fit_model(ModelForm::M4, s);
    for (auto& x : s) {
        x.mos_a *= 2.5;
        x.mos_v *= 2.5;
        x.mos_av *= 2.5;
    }
    const auto scaled = fit_model(ModelForm::M4, s);
    CHECK(*scaled.alpha[0] == doctest::Approx(2.5 * *base.alpha[0]).epsilon(1e-10));
    CHECK(*scaled.alpha[1] == doctest::Approx(*base.alpha[1]).epsilon(1e-10));
    CHECK(predict(scaled, 2.5 * 3.0, 2.5 * 2.0) == doctest::Approx(2.5 * predict(base, 3.0, 2.0)).epsilon(1e-10));
}

TEST_CASE("degenerate fits") {
    auto s = test::multiplicative_population(20, 4);
    for (auto& x : s) x.mos_a = 3.0;
    CHECK_THROWS_AS(fit_model(ModelForm::M4, s), DegenerateData);
    CHECK_THROWS_AS(fit_model(ModelForm::M1, std::vector<AvSample>(s.begin(), s.begin() + 4)), InvalidArgument);
}

TEST_CASE("train/test split") {
    const auto s = test::multiplicative_population(10, 1);
    auto [tr, te] = split_train_test(s, 0.8, 42);
    CHECK(tr.size() == 8);
    CHECK(te.size() == 2);
    auto [tr2, te2] = split_train_test(s, 0.8, 42);
    std::set<std::string> ids;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        CHECK(tr[i].condition_id == tr2[i].condition_id);
        ids.insert(tr[i].condition_id);
    }
    for (const auto& x : te) ids.insert(x.condition_id);
    CHECK(ids.size() == 10);
    CHECK_THROWS_AS(split_train_test(s, 1.0, 42), InvalidArgument);
    CHECK_THROWS_AS(split_train_test(s, 0.0, 42), InvalidArgument);

    const auto big = test::multiplicative_population(53, 2, 0.2, 1.5, 5.0, 4);
    auto [st, ss] = split_train_test(big, 0.8, 7, true);
    CHECK(st.size() == 43);
    std::map<std::string, int> have, total;
    for (const auto& x : big) ++total[x.content_id];
    for (const auto& x : st) ++have[x.content_id];
    for (const auto& [c, n] : total) CHECK(std::abs(have[c] - 0.8 * n) < 1.0);
}

TEST_CASE("evaluation statistics") {
    const auto s = grid_samples([](double a, double v) { return 0.2 + 0.18 * a * v; });
    const auto m = fit_model(ModelForm::M2, s);
    const auto st = evaluate_model(m, s);
    CHECK(*st.pcc == doctest::Approx(1.0));
    CHECK(*st.srocc == doctest::Approx(1.0));
    CHECK(st.rmse < 1e-9);

    FittedModel flat;
    flat.form = ModelForm::M2;
    flat.alpha[0] = 3.0;
    flat.alpha[1] = 0.0;
    const auto fs = evaluate_model(flat, s);
    CHECK_FALSE(fs.pcc.has_value());
    CHECK(fs.rmse > 0.0);

    const auto noisy = test::multiplicative_population(100, 5);
    const auto m2 = fit_model(ModelForm::M2, noisy);
    const double r = evaluate_model(m2, noisy).rmse;
    CHECK(r >= 0.15);
    CHECK(r <= 0.25);
}

TEST_CASE("subjective correlation table") {
    auto exact = grid_samples([](double a, double v) { return a * v; });
    auto t = subjective_correlation_table(exact);
    CHECK(t.columns.front() == "All");
    CHECK(*t.rows[2][0] == doctest::Approx(1.0));

    auto fixed = exact;
    for (auto& x : fixed) x.mos_a = 2.0;
    t = subjective_correlation_table(fixed);
    CHECK_FALSE(t.rows[0][0].has_value());
    CHECK_FALSE(t.warnings.empty());

    const auto pop = test::multiplicative_population(100, 2024);
    t = subjective_correlation_table(pop);
    CHECK(*t.rows[2][0] >= *t.rows[0][0]);
    CHECK(*t.rows[2][0] >= *t.rows[1][0]);

    auto sparse = exact;
    sparse.push_back({"lonely", "z", 2, 2, 4});
    t = subjective_correlation_table(sparse);
    CHECK(std::find(t.columns.begin(), t.columns.end(), "lonely") == t.columns.end());
}

TEST_CASE("fit serialization is deterministic") {
    const auto pop = test::multiplicative_population(40, 8);
    FitRequest req;
    req.repeats = 3;
    const auto a = run_fit(pop, req).dump();
    const auto b = run_fit(pop, req).dump();
    CHECK(a == b);
    CHECK(run_fit(pop, req)["models"].size() == 6);
}
