#include "gmsel/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "gmsel/errors.hpp"

namespace gmsel {
namespace {

// Least-squares fit of y on the columns of A; returns (fitted values, rank).
std::pair<Eigen::VectorXd, int> least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& y) {
    if (A.cols() == 0) return {Eigen::VectorXd::Zero(y.size()), 0};
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    const int rank = static_cast<int>(qr.rank());
    if (rank == 0) return {Eigen::VectorXd::Zero(y.size()), 0};
    // Project onto the span of the first `rank` Householder directions.
    Eigen::VectorXd z = qr.householderQ().adjoint() * y;
    z.tail(z.size() - rank).setZero();
    return {qr.householderQ() * z, rank};
}

void fit_coords(const Eigen::VectorXd& y, const CoordSubset& m, FitRecord& f) {
    for (int i : m.idx) {
        if (i >= y.size()) throw DomainError("project: coordinate index out of range");
        f.mu_hat[i] = y[i];
    }
    f.effective_rank = static_cast<int>(m.idx.size());
}

void fit_columns(const Eigen::VectorXd& y, const ColumnSubset& m, const Design* design, FitRecord& f) {
    if (!design || design->X.rows() != y.size()) throw DomainError("project: column model needs an n-row design matrix");
    Eigen::MatrixXd A(y.size(), static_cast<Eigen::Index>(m.idx.size()));
    for (std::size_t j = 0; j < m.idx.size(); ++j) {
        if (m.idx[j] >= design->X.cols()) throw DomainError("project: column index out of range");
        A.col(static_cast<Eigen::Index>(j)) = design->X.col(m.idx[j]);
    }
    auto [mu, rank] = least_squares(A, y);
    f.mu_hat = std::move(mu);
    f.effective_rank = rank;
}

void fit_change_points(const Eigen::VectorXd& y, const ChangePoints& m, FitRecord& f) {
    const int n = static_cast<int>(y.size());
    std::vector<int> bounds{0};
    bounds.insert(bounds.end(), m.starts.begin(), m.starts.end());
    bounds.push_back(n);
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s) {
        const int a = bounds[s], b = bounds[s + 1];
        if (a >= b) throw DomainError("project: change points must lie in 1..n-1");
        const double mean = y.segment(a, b - a).mean();
        f.mu_hat.segment(a, b - a).setConstant(mean);
    }
    f.effective_rank = static_cast<int>(bounds.size()) - 1;
}

void fit_partition(const Eigen::VectorXd& y, const PartitionIndex& m, const Design* design, FitRecord& f) {
    const int d = static_cast<int>(m.k.size());
    if (!design || design->points.rows() != y.size() || design->points.cols() != d) {
        throw DomainError("project: partition model needs n x d design points");
    }
    // Group observations by cell.
    std::map<std::vector<int>, std::vector<int>> cells;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        std::vector<int> cell(d);
        for (int a = 0; a < d; ++a) cell[a] = partition_cell(design->points(i, a), m.k[a]);
        cells[cell].push_back(static_cast<int>(i));
    }
    int terms = 1;
    for (int a = 0; a < d; ++a) terms *= m.r + 1;
    int rank = 0;
    for (const auto& [cell, rows] : cells) {
        // Tensor monomials in coordinates rescaled to [-1, 1] within the cell.
        Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), terms);
        Eigen::VectorXd ys(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            std::vector<double> u(d);
            for (int a = 0; a < d; ++a) {
                const double width = 1.0 / m.k[a];
                u[a] = (design->points(rows[r], a) - (cell[a] + 0.5) * width) / (0.5 * width);
            }
            for (int t = 0; t < terms; ++t) {
                double v = 1.0;
                int code = t;
                for (int a = 0; a < d; ++a) {
                    v *= std::pow(u[a], code % (m.r + 1));
                    code /= m.r + 1;
                }
                A(static_cast<Eigen::Index>(r), t) = v;
            }
            ys[static_cast<Eigen::Index>(r)] = y[rows[r]];
        }
        auto [mu, cell_rank] = least_squares(A, ys);
        for (std::size_t r = 0; r < rows.size(); ++r) f.mu_hat[rows[r]] = mu[static_cast<Eigen::Index>(r)];
        rank += cell_rank;
    }
    f.effective_rank = rank;
}

}  // namespace

int partition_cell(double t, int k) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("partition: design points must lie in [0, 1]");
    return std::min(k - 1, static_cast<int>(std::floor(t * k)));
}

FitRecord project(const Eigen::VectorXd& y, const ModelKey& model, const Design* design) {
    if (model.n != y.size()) throw DomainError("project: model and data disagree on n");
    FitRecord f;
    f.model = model;
    f.mu_hat = Eigen::VectorXd::Zero(y.size());
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, CoordSubset>) fit_coords(y, m, f);
            else if constexpr (std::is_same_v<T, ColumnSubset>) fit_columns(y, m, design, f);
            else if constexpr (std::is_same_v<T, ChangePoints>) fit_change_points(y, m, f);
            else fit_partition(y, m, design, f);
        },
        model.model);
    f.rss = snap_rss((y - f.mu_hat).squaredNorm(), y.squaredNorm());
    const int N = f.N();
    f.sigma2_hat = N > 0 ? f.rss / N : 0.0;
    return f;
}

double crit_L(double rss, double pen, int n, int dim) {
    if (n - dim < 1) throw DomainError("crit_L: need N_m >= 1");
    return rss * (1.0 + pen / (n - dim));
}

double crit_L(const FitRecord& fit, double pen) { return crit_L(fit.rss, pen, fit.n(), fit.effective_rank); }

std::optional<double> crit_K(double rss, double pen_prime, int n) {
    if (!(rss >= kRssFloor)) return std::nullopt;
    return 0.5 * n * std::log(rss / n) + 0.5 * pen_prime;
}

std::optional<double> crit_K(const FitRecord& fit, double pen_prime) { return crit_K(fit.rss, pen_prime, fit.n()); }

std::optional<double> crit_K_kullback(double rss, double pen_star, int n, int dim) {
    if (n - dim < 1) throw DomainError("crit_K_kullback: need N_m >= 1");
    if (!(rss >= kRssFloor)) return std::nullopt;
    return 0.5 * n * std::log(rss / (n - dim)) + 0.5 * pen_star;
}

std::optional<double> crit_K_kullback(const FitRecord& fit, double pen_star) {
    return crit_K_kullback(fit.rss, pen_star, fit.n(), fit.effective_rank);
}

}  // namespace gmsel
