#include "gmsel/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "gmsel/errors.hpp"
#include "gmsel/numerics.hpp"

namespace gmsel {

SelectionOutcome select_spec(const Eigen::VectorXd& y, const CollectionSpec& spec, const PenaltyRule& rule,
                             Criterion criterion, const Design* design) {
    spec.validate();
    if (static_cast<int>(y.size()) != spec.n) throw DomainError("select_spec: y length differs from spec.n");
    const WeightFn weights = weight_fn(spec);
    auto need_x = [&]() -> const Eigen::MatrixXd& {
        if (!design || design->X.cols() != spec.n_columns || design->X.rows() != spec.n) {
            throw DomainError("select_spec: variable selection needs an n x N design matrix");
        }
        return design->X;
    };
    switch (spec.family) {
        case Family::NonzeroComponents: return select_nonzero(y, spec.p, rule, criterion, weights);
        case Family::OrderedVarsel: return select_ordered(y, need_x(), spec.p, rule, weights, criterion);
        case Family::CompleteVarsel:
            return select_complete(y, need_x(), spec.p, rule, weights, spec.budget, criterion);
        case Family::ChangePointsConst: return select_changepoints(y, spec.p, rule, weights, criterion);
        case Family::PartitionPoly:
            if (!design || design->points.rows() != spec.n || design->points.cols() != spec.d) {
                throw DomainError("select_spec: partitions need n x d design points");
            }
            return select_partition(y, design->points, spec.d, rule, weights, spec.r_max, criterion);
        case Family::DyadicSplines: break;
    }
    throw DomainError("select_spec: the dyadic family is infinite and cannot be searched");
}

std::string criterion_name(Criterion c) {
    switch (c) {
        case Criterion::Auto: return "auto";
        case Criterion::CritL: return "crit_L";
        case Criterion::CritK: return "crit_K";
        case Criterion::CritKullback: return "crit_kullback";
    }
    return "unknown";
}

Scorer::Scorer(PenaltyRule rule, int n, Criterion criterion)
    : pen_(std::move(rule), n), criterion_(criterion) {
    if (criterion_ == Criterion::Auto) {
        criterion_ = pen_.rule().is_kullback() ? Criterion::CritKullback : Criterion::CritL;
    }
}

std::optional<double> Scorer::value(double rss, int D, double L) const {
    const double pen = penalty(D, L);
    const int n = pen_.n();
    switch (criterion_) {
        case Criterion::CritK: return crit_K(rss, pen_convert(pen, D, n, PenDirection::ToPrime), n);
        case Criterion::CritKullback: return crit_K_kullback(rss, pen, n, D);
        default: return crit_L(rss, pen, n, D);
    }
}

namespace {

struct Candidate {
    std::optional<double> value;  // nullopt: saturated under a log criterion
    int rank = 0;
    ModelKey key;
    double rss = 0.0;
    double pen = 0.0;
    double L = 0.0;
};

// Strict preference: finite criterion beats saturated, then smaller
// criterion, then smaller effective rank, then smaller key.
bool better(const Candidate& a, const Candidate& b) {
    const bool sa = !a.value, sb = !b.value;
    if (sa != sb) return !sa;
    if (!sa && *a.value != *b.value) return *a.value < *b.value;
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.key < b.key;
}

class Tracker {
public:
    Tracker(const Scorer& scorer, const Eigen::VectorXd& y) : scorer_(scorer), y_norm2_(y.squaredNorm()) {}

    void offer(ModelKey key, double rss, int rank, double L) {
        rss = snap_rss(rss, y_norm2_);
        Candidate c;
        c.value = scorer_.value(rss, rank, L);
        c.rank = rank;
        c.rss = rss;
        c.pen = scorer_.penalty(rank, L);
        c.L = L;
        c.key = std::move(key);
        ++evaluated_;
        auto it = per_dim_.find(rank);
        if (it == per_dim_.end()) {
            per_dim_.emplace(rank, c);
        } else if (better(c, it->second)) {
            it->second = c;
        }
        if (!best_ || better(c, *best_)) best_ = std::move(c);
    }

    SelectionOutcome finish(const Eigen::VectorXd& y, const Design* design) const {
        if (!best_) throw DomainError("selection: no model was evaluated");
        SelectionOutcome out;
        out.m_hat = best_->key;
        out.fit = project(y, best_->key, design);
        out.weight = best_->L;
        out.criterion = scorer_.criterion();
        out.evaluated = evaluated_;
        out.penalty = scorer_.penalty(out.fit.effective_rank, best_->L);
        const auto v = scorer_.value(out.fit.rss, out.fit.effective_rank, best_->L);
        out.saturated = !v.has_value();
        out.criterion_value = v ? *v : -std::numeric_limits<double>::infinity();
        for (const auto& [dim, c] : per_dim_) {
            out.trace.push_back({dim, c.rss, c.pen, c.value ? *c.value : -std::numeric_limits<double>::infinity()});
        }
        return out;
    }

private:
    const Scorer& scorer_;
    double y_norm2_;
    std::optional<Candidate> best_;
    std::map<int, Candidate> per_dim_;
    std::uint64_t evaluated_ = 0;
};

WeightFn default_nonzero_weights(int n) {
    return [n](const ModelKey& key) { return weight_nonzero(key.size(), n); };
}

}  // namespace

SelectionOutcome select_generic(const Eigen::VectorXd& y, const std::vector<ModelKey>& models,
                                const PenaltyRule& rule, const WeightFn& weights, Criterion criterion,
                                const Design* design) {
    if (models.empty()) throw DomainError("select_generic: model list is empty");
    const int n = static_cast<int>(y.size());
    const Scorer scorer(rule, n, criterion);
    Tracker tracker(scorer, y);
    for (const auto& key : models) {
        const FitRecord fit = project(y, key, design);
        tracker.offer(key, fit.rss, fit.effective_rank, weights(key));
    }
    return tracker.finish(y, design);
}

namespace {

// Coordinates sorted by decreasing y_i^2, ties toward the lower index.
std::vector<int> order_by_magnitude(const Eigen::VectorXd& y) {
    std::vector<int> order(static_cast<std::size_t>(y.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return y[a] * y[a] > y[b] * y[b]; });
    return order;
}

// rss of the best model of each size 0..p.
std::vector<double> nonzero_rss(const Eigen::VectorXd& y, const std::vector<int>& order, int p) {
    const int n = static_cast<int>(y.size());
    std::vector<double> rss(static_cast<std::size_t>(p) + 1);
    double tail = 0.0;
    for (int i = n - 1; i >= p; --i) tail += y[order[i]] * y[order[i]];
    rss[p] = tail;
    for (int D = p - 1; D >= 0; --D) {
        tail += y[order[D]] * y[order[D]];
        rss[D] = tail;
    }
    return rss;
}

ModelKey top_coords(const std::vector<int>& order, int D, int n) {
    std::vector<int> idx(order.begin(), order.begin() + D);
    std::sort(idx.begin(), idx.end());
    return ModelKey::coords(std::move(idx), n);
}

void check_nonzero_p(int p, int n) {
    if (p < 0 || p > n - 2) throw DomainError("select_nonzero: need 0 <= p <= n - 2");
}

}  // namespace

SelectionOutcome select_nonzero(const Eigen::VectorXd& y, int p, const PenaltyRule& rule, Criterion criterion,
                                const WeightFn& weights) {
    const int n = static_cast<int>(y.size());
    check_nonzero_p(p, n);
    const WeightFn w = weights ? weights : default_nonzero_weights(n);
    const Scorer scorer(rule, n, criterion);
    Tracker tracker(scorer, y);
    const auto order = order_by_magnitude(y);
    const auto rss = nonzero_rss(y, order, p);
    for (int D = 0; D <= p; ++D) {
        ModelKey key = top_coords(order, D, n);
        const double L = w(key);
        tracker.offer(std::move(key), rss[D], D, L);
    }
    return tracker.finish(y, nullptr);
}

SelectionOutcome select_nonzero(const Eigen::VectorXd& y, const std::vector<double>& pen_by_dim,
                                Criterion criterion) {
    const int n = static_cast<int>(y.size());
    const int p = static_cast<int>(pen_by_dim.size()) - 1;
    check_nonzero_p(p, n);
    std::map<int, double> table;
    for (int D = 0; D <= p; ++D) table[D] = pen_by_dim[D];
    return select_nonzero(y, p, PenaltyRule::user_table(std::move(table)), criterion,
                          [](const ModelKey&) { return 0.0; });
}

SelectionOutcome select_ordered(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, int p,
                                const PenaltyRule& rule, const WeightFn& weights, Criterion criterion) {
    const int n = static_cast<int>(y.size());
    if (X.rows() != n) throw DomainError("select_ordered: design has the wrong number of rows");
    if (p < 0 || p > std::min<int>(static_cast<int>(X.cols()), n - 2)) {
        throw DomainError("select_ordered: need 0 <= p <= min(N, n - 2)");
    }
    const Scorer scorer(rule, n, criterion);
    Tracker tracker(scorer, y);
    Eigen::MatrixXd Q(n, p);
    Eigen::VectorXd r = y;
    int rank = 0;
    tracker.offer(ModelKey::columns({}, n), r.squaredNorm(), 0, weights(ModelKey::columns({}, n)));
    std::vector<int> idx;
    for (int d = 0; d < p; ++d) {
        Eigen::VectorXd v = X.col(d);
        const double norm0 = v.norm();
        for (int pass = 0; pass < 2; ++pass) {
            for (int j = 0; j < rank; ++j) v -= Q.col(j).dot(v) * Q.col(j);
        }
        const double nv = v.norm();
        if (nv > 1e-10 * norm0 && nv > 0.0) {
            Q.col(rank) = v / nv;
            r -= Q.col(rank).dot(r) * Q.col(rank);
            ++rank;
        }
        idx.push_back(d);
        ModelKey key = ModelKey::columns(idx, n);
        const double L = weights(key);
        tracker.offer(std::move(key), r.squaredNorm(), rank, L);
    }
    Design design;
    design.X = X;
    return tracker.finish(y, &design);
}

namespace {

class SubsetSearch {
public:
    SubsetSearch(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, int p, const WeightFn& weights,
                 Tracker& tracker)
        : X_(X), p_(p), n_(static_cast<int>(y.size())), weights_(weights), tracker_(tracker),
          Q_(y.size(), p), R_(y.size(), p + 1), col_norm_(X.cols()) {
        R_.col(0) = y;
        for (Eigen::Index j = 0; j < X.cols(); ++j) col_norm_[j] = X.col(j).norm();
    }

    void run() {
        tracker_.offer(ModelKey::columns({}, n_), R_.col(0).squaredNorm(), 0, weights_(ModelKey::columns({}, n_)));
        if (p_ > 0) extend(0, 0, 0);
    }

private:
    void extend(int start, int depth, int rank) {
        Eigen::VectorXd v(n_);
        for (int j = start; j < X_.cols(); ++j) {
            v = X_.col(j);
            for (int pass = 0; pass < 2; ++pass) {
                for (int k = 0; k < rank; ++k) v -= Q_.col(k).dot(v) * Q_.col(k);
            }
            const double nv = v.norm();
            int new_rank = rank;
            if (nv > 1e-10 * col_norm_[j] && nv > 0.0) {
                Q_.col(rank) = v / nv;
                R_.col(depth + 1) = R_.col(depth) - Q_.col(rank).dot(R_.col(depth)) * Q_.col(rank);
                new_rank = rank + 1;
            } else {
                R_.col(depth + 1) = R_.col(depth);
            }
            subset_.push_back(j);
            ModelKey key = ModelKey::columns(subset_, n_);
            const double L = weights_(key);
            tracker_.offer(std::move(key), R_.col(depth + 1).squaredNorm(), new_rank, L);
            if (depth + 1 < p_) extend(j + 1, depth + 1, new_rank);
            subset_.pop_back();
        }
    }

    const Eigen::MatrixXd& X_;
    int p_;
    int n_;
    const WeightFn& weights_;
    Tracker& tracker_;
    Eigen::MatrixXd Q_;
    Eigen::MatrixXd R_;
    Eigen::VectorXd col_norm_;
    std::vector<int> subset_;
};

}  // namespace

SelectionOutcome select_complete(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, int p,
                                 const PenaltyRule& rule, const WeightFn& weights, std::uint64_t budget,
                                 Criterion criterion) {
    const int n = static_cast<int>(y.size());
    if (X.rows() != n) throw DomainError("select_complete: design has the wrong number of rows");
    CollectionSpec spec = CollectionSpec::complete(n, static_cast<int>(X.cols()), p);
    spec.budget = budget;
    const std::uint64_t count = count_models(spec);
    if (count > budget) throw BudgetExceeded(count, budget);
    const Scorer scorer(rule, n, criterion);
    Tracker tracker(scorer, y);
    SubsetSearch(y, X, p, weights, tracker).run();
    Design design;
    design.X = X;
    return tracker.finish(y, &design);
}

SelectionOutcome select_changepoints(const Eigen::VectorXd& y, int p, const PenaltyRule& rule,
                                     const WeightFn& weights, Criterion criterion) {
    const int n = static_cast<int>(y.size());
    if (p < 0 || p > n - 3) throw DomainError("select_changepoints: need 0 <= p <= n - 3");
    // Prefix sums of the centered data keep the segment costs accurate.
    const double mean = y.mean();
    std::vector<double> s1(n + 1, 0.0), s2(n + 1, 0.0);
    for (int i = 0; i < n; ++i) {
        const double c = y[i] - mean;
        s1[i + 1] = s1[i] + c;
        s2[i + 1] = s2[i] + c * c;
    }
    auto cost = [&](int a, int b) {
        const double s = s1[b] - s1[a];
        return std::max(0.0, (s2[b] - s2[a]) - s * s / (b - a));
    };
    // g[q][i]: least rss of [i, n) split into q segments; arg[q][i]: the
    // smallest start of the second segment attaining it.
    const int qmax = p + 1;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> g(qmax + 1, std::vector<double>(n + 1, inf));
    std::vector<std::vector<int>> arg(qmax + 1, std::vector<int>(n + 1, -1));
    for (int i = 0; i < n; ++i) g[1][i] = cost(i, n);
    for (int q = 2; q <= qmax; ++q) {
        for (int i = 0; i <= n - q; ++i) {
            for (int s = i + 1; s <= n - q + 1; ++s) {
                const double v = cost(i, s) + g[q - 1][s];
                if (v < g[q][i]) {
                    g[q][i] = v;
                    arg[q][i] = s;
                }
            }
        }
    }
    const Scorer scorer(rule, n, criterion);
    Tracker tracker(scorer, y);
    for (int q = 1; q <= qmax; ++q) {
        std::vector<int> starts;
        for (int i = 0, k = q; k > 1; --k) {
            i = arg[k][i];
            starts.push_back(i);
        }
        ModelKey key = ModelKey::change_points(std::move(starts), n);
        const double L = weights(key);
        tracker.offer(std::move(key), g[q][0], q, L);
    }
    return tracker.finish(y, nullptr);
}

SelectionOutcome select_partition(const Eigen::VectorXd& y, const Eigen::MatrixXd& points, int d,
                                  const PenaltyRule& rule, const WeightFn& weights, int r_max,
                                  Criterion criterion) {
    const int n = static_cast<int>(y.size());
    if (points.rows() != n || points.cols() != d) throw DomainError("select_partition: need n x d design points");
    Design design;
    design.points = points;
    return select_generic(y, partition_models(n, d, r_max), rule, weights, criterion, &design);
}

}  // namespace gmsel
