#pragma once

#include <optional>

#include <Eigen/Dense>

#include "gmsel/collections.hpp"

namespace gmsel {

/// Side information some families need for projection.
struct Design {
    Eigen::MatrixXd X;       ///< n x N candidate columns (variable selection)
    Eigen::MatrixXd points;  ///< n x d design points in [0, 1]^d (partitions)
};

struct FitRecord {
    ModelKey model;
    Eigen::VectorXd mu_hat;
    double rss = 0.0;
    double sigma2_hat = 0.0;  ///< rss / (n - effective_rank)
    int effective_rank = 0;

    int n() const noexcept { return static_cast<int>(mu_hat.size()); }
    /// n minus the dimension of the realized span.
    int N() const noexcept { return n() - effective_rank; }
};

/// Residual sums of squares below this are treated as a saturated fit.
inline constexpr double kRssFloor = 1e-300;

/// Residuals smaller than this fraction of |y|^2 are rounding noise and are
/// reported as an exact zero.
inline constexpr double kRssRelZero = 1e-24;
inline double snap_rss(double rss, double y_norm2) { return rss <= kRssRelZero * y_norm2 ? 0.0 : rss; }

/// Orthogonal projection of y onto S_m.
FitRecord project(const Eigen::VectorXd& y, const ModelKey& model, const Design* design = nullptr);

/// Cell index of a design coordinate on a grid of k cells over [0, 1].
int partition_cell(double t, int k);

/// rss (1 + pen / N_m).
double crit_L(double rss, double pen, int n, int dim);
double crit_L(const FitRecord& fit, double pen);

/// (n/2) log(rss / n) + pen' / 2; nullopt when the fit is saturated.
std::optional<double> crit_K(double rss, double pen_prime, int n);
std::optional<double> crit_K(const FitRecord& fit, double pen_prime);

/// (n/2) log(rss / N_m) + pen* / 2; nullopt when the fit is saturated.
std::optional<double> crit_K_kullback(double rss, double pen_star, int n, int dim);
std::optional<double> crit_K_kullback(const FitRecord& fit, double pen_star);

}  // namespace gmsel
