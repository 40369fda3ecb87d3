#include "oriq/doe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "oriq/csv.hpp"
#include "oriq/error.hpp"
#include "oriq/random.hpp"
#include "oriq/report_io.hpp"

namespace oriq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Relative threshold on Cholesky pivots below which X'X counts as singular.
constexpr double kSingularTol = 1e-10;

// Exchanges must beat the incumbent by more than this (relative) margin.
constexpr double kImproveTol = 1e-12;

bool improves(double cand, double incumbent) {
    if (incumbent == kNegInf) return cand > kNegInf;
    return cand > incumbent + kImproveTol * std::max(1.0, std::abs(incumbent));
}

double criterion_of(const std::vector<std::vector<int>>& runs, const DesignProblem& p) {
    return log_det_criterion(build_model_matrix(runs, p));
}

}  // namespace

std::vector<double> Factor::numeric_codes() const {
    std::vector<double> v;
    for (const auto& l : levels) v.push_back(parse_double(l, "numeric level of factor '" + name + "'"));
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (*lo == *hi) throw InvalidArgument("numeric factor '" + name + "' needs distinct levels");
    const double a = *lo;
    const double b = *hi;
    for (auto& x : v) x = -1.0 + 2.0 * (x - a) / (b - a);
    return v;
}

std::size_t Factor::columns() const { return coding == Coding::Numeric ? 1 : levels.size() - 1; }

void Factor::validate() const {
    if (name.empty()) throw InvalidArgument("factor without a name");
    if (levels.size() < 2) throw InvalidArgument("factor '" + name + "' needs at least 2 levels");
    if (std::set<std::string>(levels.begin(), levels.end()).size() != levels.size()) {
        throw InvalidArgument("factor '" + name + "' has duplicate level labels");
    }
    if (coding == Coding::Numeric) {
        try {
            (void)numeric_codes();
        } catch (const FormatError& e) {
            throw InvalidArgument(e.what());
        }
    }
}

std::string_view to_string(Terms t) { return t == Terms::Main ? "main" : "2fi"; }

Terms parse_terms(std::string_view s) {
    if (s == "main") return Terms::Main;
    if (s == "2fi") return Terms::MainAndTwoWay;
    throw InvalidArgument("unknown terms '" + std::string(s) + "' (expected main or 2fi)");
}

std::size_t DesignProblem::n_terms() const {
    std::size_t n = 1;
    for (const auto& f : factors) n += f.columns();
    if (terms == Terms::MainAndTwoWay) {
        for (std::size_t i = 0; i < factors.size(); ++i) {
            for (std::size_t j = i + 1; j < factors.size(); ++j) n += factors[i].columns() * factors[j].columns();
        }
    }
    return n;
}

void DesignProblem::validate() const {
    if (factors.empty()) throw InvalidArgument("design problem has no factors");
    std::set<std::string> names;
    for (const auto& f : factors) {
        f.validate();
        if (!names.insert(f.name).second) throw InvalidArgument("duplicate factor name '" + f.name + "'");
    }
    if (n_runs < n_terms()) {
        throw InvalidArgument("n_runs (" + std::to_string(n_runs) + ") must be at least the number of model columns (" +
                              std::to_string(n_terms()) + ")");
    }
}

Eigen::MatrixXd build_model_matrix(const std::vector<std::vector<int>>& runs, const DesignProblem& problem) {
    const auto& fs = problem.factors;
    std::vector<std::vector<double>> codes(fs.size());
    for (std::size_t k = 0; k < fs.size(); ++k) {
        if (fs[k].coding == Coding::Numeric) codes[k] = fs[k].numeric_codes();
    }
    const Eigen::Index n = Eigen::Index(runs.size());
    Eigen::MatrixXd x(n, Eigen::Index(problem.n_terms()));
    std::vector<std::vector<double>> main(fs.size());
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& run = runs[std::size_t(r)];
        if (run.size() != fs.size()) throw InvalidArgument("run width differs from factor count");
        for (std::size_t k = 0; k < fs.size(); ++k) {
            const int lv = run[k];
            const int nl = int(fs[k].levels.size());
            if (lv < 0 || lv >= nl) throw InvalidArgument("level index out of range for factor '" + fs[k].name + "'");
            auto& cols = main[k];
            cols.clear();
            if (fs[k].coding == Coding::Numeric) {
                cols.push_back(codes[k][std::size_t(lv)]);
            } else {
                for (int c = 0; c < nl - 1; ++c) cols.push_back(lv == nl - 1 ? -1.0 : (lv == c ? 1.0 : 0.0));
            }
        }
        Eigen::Index col = 0;
        x(r, col++) = 1.0;
        for (const auto& cols : main) {
            for (double v : cols) x(r, col++) = v;
        }
        if (problem.terms == Terms::MainAndTwoWay) {
            for (std::size_t i = 0; i < fs.size(); ++i) {
                for (std::size_t j = i + 1; j < fs.size(); ++j) {
                    for (double a : main[i]) {
                        for (double b : main[j]) x(r, col++) = a * b;
                    }
                }
            }
        }
    }
    return x;
}

double log_det_criterion(const Eigen::MatrixXd& x) {
    if (x.rows() < x.cols()) return kNegInf;
    const Eigen::MatrixXd info = x.transpose() * x;
    Eigen::LLT<Eigen::MatrixXd> llt(info);
    if (llt.info() != Eigen::Success) return kNegInf;
    const double scale = std::max(1.0, info.diagonal().maxCoeff());
    const auto& l = llt.matrixLLT();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
        const double piv = l(i, i) * l(i, i);
        if (!(piv > kSingularTol * scale)) return kNegInf;
        logdet += std::log(piv);
    }
    return logdet;
}

double d_efficiency(const Design& d, const DesignProblem& problem) {
    if (!std::isfinite(d.criterion) || d.runs.empty()) return 0.0;
    const double p = double(problem.n_terms());
    return 100.0 * std::exp(d.criterion / p) / double(d.runs.size());
}

ExchangeResult coordinate_exchange(const DesignProblem& problem, int restarts, std::uint64_t seed) {
    problem.validate();
    if (restarts < 1) throw InvalidArgument("restarts must be >= 1");
    const std::size_t nf = problem.factors.size();

    struct Outcome {
        Design design;
        std::vector<double> trace;
        bool ok = false;
    };
    std::vector<Outcome> outcomes(static_cast<std::size_t>(restarts));

#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < restarts; ++r) {
        Rng rng(mix_seed(seed, std::uint64_t(r)));
        auto& out = outcomes[std::size_t(r)];
        std::vector<std::vector<int>> runs(problem.n_runs, std::vector<int>(nf, 0));
        double crit = kNegInf;
        for (int attempt = 0; attempt < 100 && crit == kNegInf; ++attempt) {
            for (auto& run : runs) {
                for (std::size_t k = 0; k < nf; ++k) run[k] = int(rng.below(problem.factors[k].levels.size()));
            }
            crit = criterion_of(runs, problem);
        }
        if (crit == kNegInf) continue;
        out.trace.push_back(crit);

        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t i = 0; i < runs.size(); ++i) {
                for (std::size_t k = 0; k < nf; ++k) {
                    const int incumbent = runs[i][k];
                    int best_level = incumbent;
                    double best = crit;
                    const int nl = int(problem.factors[k].levels.size());
                    for (int lv = 0; lv < nl; ++lv) {
                        if (lv == incumbent) continue;
                        runs[i][k] = lv;
                        const double c = criterion_of(runs, problem);
                        if (improves(c, best)) {
                            best = c;
                            best_level = lv;
                        }
                    }
                    runs[i][k] = best_level;
                    if (best_level != incumbent) {
                        crit = best;
                        out.trace.push_back(crit);
                        improved = true;
                    }
                }
            }
        }
        out.design = {runs, crit};
        out.ok = true;
    }

    ExchangeResult res;
    bool found = false;
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
        res.traces.push_back(outcomes[r].trace);
        if (!outcomes[r].ok) continue;
        if (!found || outcomes[r].design.criterion > res.design.criterion) {
            res.design = outcomes[r].design;
            res.best_restart = r;
            found = true;
        }
    }
    if (!found) throw DegenerateData("no nonsingular starting design found in 100 attempts");
    return res;
}

Design exhaustive_optimal(const DesignProblem& problem) {
    problem.validate();
    const std::size_t nf = problem.factors.size();
    std::size_t combos = 1;
    for (const auto& f : problem.factors) combos *= f.levels.size();
    double space = 1.0;
    for (std::size_t i = 0; i < problem.n_runs; ++i) space *= double(combos);
    if (space > 1e6) throw InvalidArgument("instance too large for exhaustive search (" + std::to_string(space) + " > 1e6)");

    std::vector<std::vector<int>> candidates;
    for (std::size_t c = 0; c < combos; ++c) {
        std::vector<int> run(nf);
        std::size_t rem = c;
        for (std::size_t k = nf; k-- > 0;) {
            const std::size_t nl = problem.factors[k].levels.size();
            run[k] = int(rem % nl);
            rem /= nl;
        }
        candidates.push_back(std::move(run));
    }

    // nondecreasing candidate index sequences enumerate run multisets
    std::vector<std::size_t> pick(problem.n_runs, 0);
    std::vector<std::vector<int>> runs(problem.n_runs);
    Design best{{}, kNegInf};
    for (;;) {
        for (std::size_t i = 0; i < pick.size(); ++i) runs[i] = candidates[pick[i]];
        const double c = criterion_of(runs, problem);
        if (c > best.criterion) best = {runs, c};
        std::size_t pos = pick.size();
        while (pos > 0 && pick[pos - 1] == combos - 1) --pos;
        if (pos == 0) break;
        const std::size_t v = ++pick[pos - 1];
        for (std::size_t i = pos; i < pick.size(); ++i) pick[i] = v;
    }
    if (best.criterion == kNegInf) throw DegenerateData("every design of this size is singular");
    return best;
}

std::string design_to_csv(const Design& d, const DesignProblem& problem) {
    std::string s = "run";
    for (const auto& f : problem.factors) s += "," + csv_escape(f.name);
    s += "\n";
    for (std::size_t i = 0; i < d.runs.size(); ++i) {
        s += std::to_string(i + 1);
        for (std::size_t k = 0; k < problem.factors.size(); ++k) {
            s += "," + csv_escape(problem.factors[k].levels[std::size_t(d.runs[i][k])]);
        }
        s += "\n";
    }
    s += "# terms=" + std::string(to_string(problem.terms)) + " columns=" + std::to_string(problem.n_terms()) +
         " runs=" + std::to_string(d.runs.size()) + "\n";
    s += "# log_det=" + format_sig6(d.criterion) + " d_efficiency=" + format_sig6(d_efficiency(d, problem)) + "\n";
    return s;
}

}  // namespace oriq
