#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gmsel/collections.hpp"
#include "gmsel/estimation.hpp"
#include "gmsel/penalties.hpp"
#include "gmsel/rng.hpp"
#include "gmsel/selectors.hpp"

namespace gmsel {

enum class Study { NonzeroGrid, VarselTheta1, VarselTheta2, OverfitDemo };

Study parse_study(const std::string& name);
std::string study_name(Study s);

struct SimConfig {
    Study study = Study::NonzeroGrid;
    int reps = 1000;
    std::uint64_t master_seed = 1;
    std::vector<int> ns{32};
    /// Explicit k values; empty means I_p = {2^j <= p} + {0, p}.
    std::vector<int> ks;
    std::vector<double> ss{3.0, 4.0, 5.0};
    std::vector<double> sigmas{1.0, 3.0};
    std::vector<double> Ks{1.1, 1.2};
    bool classical = true;  ///< also run AIC, BIC and AMDL
    int designs = 50;       ///< Theta1 design draws
    int p_varsel = 8;       ///< maximal |m| for the variable-selection studies
    double overfit_C = 0.5;
    int overfit_dbar = 100;

    /// Throws DomainError on an invalid grid.
    void validate() const;
};

/// One aggregated configuration point for one criterion.
struct SimRow {
    std::string study;
    std::string criterion;
    int n = 0;
    int p = 0;
    int k = 0;          ///< true number of nonzero components (nonzero grid)
    double s = 0.0;     ///< signal level (nonzero grid)
    double sigma = 1.0;
    int design = -1;    ///< Theta1 design index; -1 for a pooled or single-design row
    int reps = 0;
    double risk = 0.0;  ///< mean of |mu - mu_hat|^2
    double risk_se = 0.0;
    double oracle = 0.0;  ///< inf_m E |mu - mu_hat_m|^2
    std::optional<double> ratio;  ///< risk / oracle when oracle > 0
    double ratio_se = 0.0;
    double mean_dim = 0.0;
    double mean_dim_se = 0.0;
    double frac_dim0 = 0.0;
    double frac_dim1 = 0.0;
    double frac_dim2plus = 0.0;
    double frac_full = 0.0;  ///< selected dimension equals the cap p
    double frac_pos = 0.0;   ///< selected dimension > 0
    std::optional<double> frac_eq_m0;
    std::optional<double> frac_sup_m0;
    std::optional<double> frac_above;  ///< overfit chain: P(D_hat >= (1 - C) D_bar / 2)
};

struct SimReport {
    std::vector<SimRow> rows;
};

/// Binomial standard error of an observed frequency.
double binomial_se(double frac, int reps);

/// p = floor(n / log n) and I_p.
int nonzero_p(int n);
std::vector<int> nonzero_ks(int p);

/// Penalty of a selected dimension D under the nonzero-grid rules.
std::vector<double> nonzero_penalties(const PenaltyRule& rule, int n, int p);

/// inf_D [s^2 (k - D) 1{D <= k} + D].
double nonzero_oracle(int k, double s, int p);

SimReport run_sim_nonzero(const SimConfig& config);

/// Theta1 design: rows i.i.d. N(0, Sigma) with Sigma_jk = 0.5^|j-k|, N = 8.
Eigen::MatrixXd theta1_design(int n, RngStream& stream);
Eigen::VectorXd theta1_coefficients();
/// Theta2 design (N = n) and its mean (n, n, 0, ..., 0).
Eigen::MatrixXd theta2_design(int n);
Eigen::VectorXd theta2_mean(int n);

/// inf over subsets of size <= p of |mu - Pi_m mu|^2 + rank sigma^2.
double varsel_oracle(const Eigen::VectorXd& mu, const Eigen::MatrixXd& X, int p, double sigma);

/// Theta1 (n = 20, per-design and pooled rows) or Theta2 (n = 20).
SimReport run_sim_varsel(const SimConfig& config);

/// Sub-minimal penalties at mu = 0: the C * D chain on nested models and
/// AIC/BIC on the nonzero-components collection.
SimReport run_overfit_demo(const SimConfig& config);

SimReport run_study(const SimConfig& config);

void write_csv(std::ostream& os, const SimReport& report);
void write_markdown(std::ostream& os, const SimReport& report);

struct PenaltyCurveRow {
    int D = 0;
    double amdl = 0.0;
    double kl = 0.0;
};
/// Nonzero-grid penalties pen_AMDL(D) and pen_K(D) for D = 0..p.
std::vector<PenaltyCurveRow> emit_penalty_curve(int n, double K, int p);
void write_penalty_curve_csv(std::ostream& os, const std::vector<PenaltyCurveRow>& rows);

/// Columns of a CSV file with a header row.
struct CsvTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
    /// Column index by name, or -1.
    int find(const std::string& name) const;
};

/// Parses numeric CSV; throws ParseError with the 1-based line number.
CsvTable read_csv(std::istream& is);
CsvTable read_csv_file(const std::string& path);

struct FitOptions {
    std::string family = "nonzero";  ///< nonzero|ordered|complete|changepoint|partition
    std::string penalty = "kl";      ///< kl|fpe|aic|bic|amdl|kullback
    double K = 1.1;
    double K1 = 1.1;
    double K2 = 0.0;
    int p = -1;  ///< -1 picks a family default
    std::uint64_t budget = 10'000'000;
    std::string criterion = "auto";  ///< auto|crit-l|crit-k|kullback
};

PenaltyRule make_rule(const FitOptions& options);

/// Runs the selector of options.family. `X` holds design columns for the
/// variable-selection families and `points` the design points for
/// partitions; unused inputs may be empty.
SelectionOutcome fit_arrays(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, const Eigen::MatrixXd& points,
                            const FitOptions& options);

/// Runs the selector for a table holding `y` and, as needed, x1..xN or t1..td.
SelectionOutcome fit_table(const CsvTable& table, const FitOptions& options);
SelectionOutcome fit_file(const std::string& path, const FitOptions& options);

/// Human-readable summary: m_hat, sigma2_hat, criterion trace, fitted values.
void write_outcome(std::ostream& os, const SelectionOutcome& outcome);

}  // namespace gmsel
