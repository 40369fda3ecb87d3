#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace oriq {

enum class Coding { Categorical, Numeric };

struct Factor {
    std::string name;
    std::vector<std::string> levels;
    Coding coding = Coding::Categorical;

    /// Level codes on [-1, 1] for numeric factors; throws InvalidArgument
    /// for non-numeric or degenerate labels.
    std::vector<double> numeric_codes() const;
    /// Model-matrix columns contributed by this factor's main effect.
    std::size_t columns() const;
    void validate() const;
};

enum class Terms { Main, MainAndTwoWay };

std::string_view to_string(Terms t);
Terms parse_terms(std::string_view s);

struct DesignProblem {
    std::vector<Factor> factors;
    Terms terms = Terms::Main;
    std::size_t n_runs = 0;

    std::size_t n_terms() const;
    void validate() const;
};

/// Level index per (run, factor) and the log det(X'X) of the design.
struct Design {
    std::vector<std::vector<int>> runs;
    double criterion = 0.0;
};

/// Intercept, effects-coded categoricals (last level = -1 everywhere),
/// numeric factors scaled onto [-1, 1], then two-factor interaction
/// products for every factor pair when requested.
Eigen::MatrixXd build_model_matrix(const std::vector<std::vector<int>>& runs, const DesignProblem& problem);

/// log det(X'X); -infinity when X'X is singular.
double log_det_criterion(const Eigen::MatrixXd& x);

/// 100 * det(X'X)^(1/p) / n_runs.
double d_efficiency(const Design& d, const DesignProblem& problem);

struct ExchangeResult {
    Design design;
    std::size_t best_restart = 0;
    std::vector<std::vector<double>> traces;  // per restart: start, then every accepted exchange
};

ExchangeResult coordinate_exchange(const DesignProblem& problem, int restarts, std::uint64_t seed);

/// Brute-force optimum over all run multisets; guarded by
/// (level combinations)^n_runs <= 1e6.
Design exhaustive_optimal(const DesignProblem& problem);

/// `[[factor]]` tables (TOML) or a CSV with columns name,levels,coding where
/// levels are separated by ';'. Format chosen from the file extension.
std::vector<Factor> read_factors(const std::filesystem::path& path);
std::vector<Factor> parse_factors_toml(std::istream& in, const std::string& source);
std::vector<Factor> parse_factors_csv(std::istream& in, const std::string& source);

/// One row per run with level labels, then a footer comment with the
/// criterion and D-efficiency.
std::string design_to_csv(const Design& d, const DesignProblem& problem);

}  // namespace oriq
