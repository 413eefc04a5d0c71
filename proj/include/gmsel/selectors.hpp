#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gmsel/collections.hpp"
#include "gmsel/estimation.hpp"
#include "gmsel/penalties.hpp"

namespace gmsel {

enum class Criterion {
    Auto,         ///< CritKullback for the Kullback rule, CritL otherwise
    CritL,        ///< rss (1 + pen / N_m)
    CritK,        ///< (n/2) log(rss / n) + pen' / 2 with pen' converted from pen
    CritKullback  ///< (n/2) log(rss / N_m) + pen / 2
};

struct TraceRow {
    int dim = 0;  ///< effective dimension
    double best_rss = 0.0;
    double penalty = 0.0;
    double criterion = 0.0;
};

struct SelectionOutcome {
    ModelKey m_hat;
    FitRecord fit;
    double criterion_value = 0.0;
    double penalty = 0.0;
    double weight = 0.0;
    Criterion criterion = Criterion::CritL;
    std::vector<TraceRow> trace;  ///< best model per dimension, by criterion
    bool saturated = false;       ///< the winner has rss below the floor
    std::uint64_t evaluated = 0;
};

/// Criterion evaluation shared by all selectors. Penalties are memoized.
class Scorer {
public:
    Scorer(PenaltyRule rule, int n, Criterion criterion = Criterion::Auto);

    /// Penalty for effective dimension D and weight L.
    double penalty(int D, double L) const { return pen_(D, L); }
    /// Criterion value; nullopt for a saturated fit under a log criterion.
    std::optional<double> value(double rss, int D, double L) const;
    Criterion criterion() const noexcept { return criterion_; }
    int n() const noexcept { return pen_.n(); }
    const PenaltyRule& rule() const noexcept { return pen_.rule(); }

private:
    PenaltyEvaluator pen_;
    Criterion criterion_;
};

/// Exhaustive argmin over an explicit model list. Every model is projected
/// once. Ties go to the smaller effective dimension, then the smaller key.
SelectionOutcome select_generic(const Eigen::VectorXd& y, const std::vector<ModelKey>& models,
                                const PenaltyRule& rule, const WeightFn& weights,
                                Criterion criterion = Criterion::Auto, const Design* design = nullptr);

/// Nonzero mean components: the best model of each size keeps the largest
/// |y_i| (ties toward the lower index). `weights` may depend on |m| only;
/// the default uses the canonical nonzero weights.
SelectionOutcome select_nonzero(const Eigen::VectorXd& y, int p, const PenaltyRule& rule,
                                Criterion criterion = Criterion::Auto, const WeightFn& weights = {});
/// Same search with a precomputed penalty for every dimension 0..p.
SelectionOutcome select_nonzero(const Eigen::VectorXd& y, const std::vector<double>& pen_by_dim,
                                Criterion criterion = Criterion::CritL);

/// Nested prefixes {1..d}, d <= p, of the design columns.
SelectionOutcome select_ordered(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, int p,
                                const PenaltyRule& rule, const WeightFn& weights,
                                Criterion criterion = Criterion::Auto);

/// All column subsets of size <= p, searched depth-first with incremental
/// orthogonalization. Throws BudgetExceeded when the count exceeds `budget`.
SelectionOutcome select_complete(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, int p,
                                 const PenaltyRule& rule, const WeightFn& weights, std::uint64_t budget,
                                 Criterion criterion = Criterion::Auto);

/// Piecewise-constant fits with at most p change points, by segmentation
/// dynamic programming. `weights` may depend on |m| only.
SelectionOutcome select_changepoints(const Eigen::VectorXd& y, int p, const PenaltyRule& rule,
                                     const WeightFn& weights, Criterion criterion = Criterion::Auto);

/// All piecewise-polynomial partition models with degree <= r_max.
SelectionOutcome select_partition(const Eigen::VectorXd& y, const Eigen::MatrixXd& points, int d,
                                  const PenaltyRule& rule, const WeightFn& weights, int r_max = 2,
                                  Criterion criterion = Criterion::Auto);

/// Dispatches to the selector of the spec's family with the spec's weights.
/// Variable-selection families need design->X; partitions need
/// design->points.
SelectionOutcome select_spec(const Eigen::VectorXd& y, const CollectionSpec& spec, const PenaltyRule& rule,
                             Criterion criterion = Criterion::Auto, const Design* design = nullptr);

std::string criterion_name(Criterion c);

}  // namespace gmsel
