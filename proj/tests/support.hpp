#pragma once

// Random instances and the exhaustive-oracle comparison shared by the unit
// tests and the acceptance runner.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gmsel/collections.hpp"
#include "gmsel/rng.hpp"
#include "gmsel/selectors.hpp"

namespace gmsel::testing {

inline Eigen::VectorXd gaussian_vector(RngStream& s, int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = s.gaussian();
    return v;
}

inline Eigen::MatrixXd gaussian_matrix(RngStream& s, int n, int m) {
    Eigen::MatrixXd X(n, m);
    for (int j = 0; j < m; ++j) X.col(j) = gaussian_vector(s, n);
    return X;
}

struct EquivalenceTally {
    int instances = 0;
    int mismatches = 0;
    std::string first_mismatch;
};

enum class OracleFamily { Nonzero, Ordered, Complete, ChangePoints, Partition1, Partition2 };

inline const char* oracle_family_name(OracleFamily f) {
    switch (f) {
        case OracleFamily::Nonzero: return "nonzero";
        case OracleFamily::Ordered: return "ordered";
        case OracleFamily::Complete: return "complete";
        case OracleFamily::ChangePoints: return "changepoint";
        case OracleFamily::Partition1: return "partition-d1";
        case OracleFamily::Partition2: return "partition-d2";
    }
    return "?";
}

/// Runs the specialized selector and select_generic on `instances` random
/// problems with n <= 12 and compares the selected keys.
inline EquivalenceTally compare_with_generic(OracleFamily family, const PenaltyRule& rule, int instances,
                                             std::uint64_t seed, Criterion criterion = Criterion::Auto) {
    EquivalenceTally tally;
    for (int rep = 0; rep < instances; ++rep) {
        RngStream s(seed, static_cast<std::uint64_t>(rep));
        const int n = 8 + static_cast<int>(s.next_u64() % 5);  // 8..12
        const int p = 1 + static_cast<int>(s.next_u64() % 3);  // 1..3
        // Signal strength varies so that both small and large models win.
        const double amp = 4.0 * s.uniform();
        Eigen::VectorXd y = gaussian_vector(s, n);
        SelectionOutcome fast, slow;
        switch (family) {
            case OracleFamily::Nonzero: {
                for (int i = 0; i < p; ++i) y[static_cast<int>(s.next_u64() % n)] += amp * 1.5;
                const auto spec = CollectionSpec::nonzero(n, p);
                fast = select_nonzero(y, p, rule, criterion);
                slow = select_generic(y, enumerate_models(spec), rule, weight_fn(spec), criterion);
                break;
            }
            case OracleFamily::Ordered:
            case OracleFamily::Complete: {
                const int cols = std::min(n, 4 + static_cast<int>(s.next_u64() % 9));
                Design design;
                design.X = gaussian_matrix(s, n, cols);
                y += amp * design.X.col(0) - 0.5 * amp * design.X.col(cols - 1);
                const int pp = std::min(p, cols);
                if (family == OracleFamily::Ordered) {
                    auto spec = CollectionSpec::ordered(n, cols, pp);
                    fast = select_ordered(y, design.X, pp, rule, weight_fn(spec), criterion);
                    slow = select_generic(y, enumerate_models(spec), rule, weight_fn(spec), criterion, &design);
                } else {
                    auto spec = CollectionSpec::complete(n, cols, pp);
                    fast = select_complete(y, design.X, pp, rule, weight_fn(spec), spec.budget, criterion);
                    slow = select_generic(y, enumerate_models(spec), rule, weight_fn(spec), criterion, &design);
                }
                break;
            }
            case OracleFamily::ChangePoints: {
                const int pp = std::min(p, n - 3);
                const int jump = 1 + static_cast<int>(s.next_u64() % (n - 1));
                for (int i = jump; i < n; ++i) y[i] += amp;
                const auto spec = CollectionSpec::change_points(n, pp);
                fast = select_changepoints(y, pp, rule, weight_fn(spec), criterion);
                slow = select_generic(y, enumerate_models(spec), rule, weight_fn(spec), criterion);
                break;
            }
            case OracleFamily::Partition1:
            case OracleFamily::Partition2: {
                const int d = family == OracleFamily::Partition1 ? 1 : 2;
                Design design;
                design.points = Eigen::MatrixXd(n, d);
                for (int i = 0; i < n; ++i) {
                    for (int a = 0; a < d; ++a) design.points(i, a) = s.uniform();
                    y[i] += amp * (design.points(i, 0) > 0.5 ? 1.0 : -1.0);
                }
                const auto spec = CollectionSpec::partition(n, d);
                fast = select_partition(y, design.points, d, rule, weight_fn(spec), spec.r_max, criterion);
                std::vector<ModelKey> models = enumerate_models(spec);
                slow = select_generic(y, models, rule, weight_fn(spec), criterion, &design);
                break;
            }
        }
        ++tally.instances;
        if (fast.m_hat != slow.m_hat) {
            if (tally.mismatches == 0) {
                tally.first_mismatch = "instance " + std::to_string(rep) + ": " + fast.m_hat.to_string() +
                                       " vs " + slow.m_hat.to_string();
            }
            ++tally.mismatches;
        }
    }
    return tally;
}

}  // namespace gmsel::testing
