#include <cmath>

#include "doctest.h"
#include "gmsel/errors.hpp"
#include "gmsel/numerics.hpp"
#include "support.hpp"

using namespace gmsel;
using namespace gmsel::testing;

TEST_CASE("specialized selectors agree with the exhaustive oracle") {
    const std::vector<PenaltyRule> rules{PenaltyRule::kl(1.1), PenaltyRule::aic(), PenaltyRule::amdl(),
                                         PenaltyRule::kullback(1.5)};
    for (auto family : {OracleFamily::Nonzero, OracleFamily::Ordered, OracleFamily::Complete,
                        OracleFamily::ChangePoints, OracleFamily::Partition1, OracleFamily::Partition2}) {
        const bool small_dims = family != OracleFamily::Partition1 && family != OracleFamily::Partition2;
        for (std::size_t r = 0; r < rules.size(); ++r) {
            // The Kullback rule needs D <= n - 5 for every model.
            if (rules[r].is_kullback() && !small_dims) continue;
            const auto tally = compare_with_generic(family, rules[r], 40, 1000 + r);
            INFO(oracle_family_name(family), " ", rules[r].name(), " ", tally.first_mismatch);
            CHECK(tally.mismatches == 0);
        }
        const auto k = compare_with_generic(family, PenaltyRule::kl(2.0), 40, 2000, Criterion::CritK);
        INFO(oracle_family_name(family), " crit_K ", k.first_mismatch);
        CHECK(k.mismatches == 0);
    }
}

TEST_CASE("generic selector basics") {
    RngStream s(5, 0);
    const Eigen::VectorXd y = gaussian_vector(s, 10);
    const auto one = select_generic(y, {ModelKey::coords({2, 3}, 10)}, PenaltyRule::fpe(),
                                    [](const ModelKey&) { return 0.0; });
    CHECK(one.m_hat == ModelKey::coords({2, 3}, 10));
    CHECK(one.evaluated == 1);
    CHECK_THROWS_AS(select_generic(y, {}, PenaltyRule::fpe(), [](const ModelKey&) { return 0.0; }), DomainError);
    // Huge penalty: the empty model wins.
    std::map<int, double> table;
    for (int D = 0; D <= 3; ++D) table[D] = D * 1e6;
    const auto spec = CollectionSpec::nonzero(10, 3);
    const auto out = select_generic(y, enumerate_models(spec), PenaltyRule::user_table(table), weight_fn(spec));
    CHECK(out.m_hat.dim == 0);
}

TEST_CASE("criterion value matches a recomputation from the fit") {
    RngStream s(6, 0);
    const int n = 30;
    Eigen::VectorXd y = gaussian_vector(s, n);
    y[3] += 6.0;
    y[17] -= 5.0;
    const auto out = select_nonzero(y, 8, PenaltyRule::kl(1.1));
    const double L = weight_nonzero(out.m_hat.dim, n);
    CHECK(std::abs(out.criterion_value - crit_L(out.fit, pen_kl(1.1, L, out.m_hat.dim, n))) <=
          1e-10 * out.criterion_value);
    CHECK(out.m_hat == ModelKey::coords({3, 17}, n));
    CHECK(out.trace.size() == 9);
}

TEST_CASE("select_nonzero edge cases") {
    CHECK(select_nonzero(Eigen::VectorXd::Zero(10), 4, PenaltyRule::kl(1.1)).m_hat.dim == 0);
    Eigen::VectorXd y(6);
    y << 2, -2, 0.1, 0.2, 0.3, 0.1;
    // Equal magnitudes: the lower index is kept first.
    std::map<int, double> t{{0, 0.0}, {1, 0.0}};
    const auto out = select_nonzero(y, 1, PenaltyRule::user_table(t), Criterion::CritL,
                                    [](const ModelKey&) { return 0.0; });
    CHECK(out.m_hat == ModelKey::coords({0}, 6));
    CHECK_THROWS_AS(select_nonzero(y, 5, PenaltyRule::kl(1.1)), DomainError);
}

TEST_CASE("increasing K never increases the selected dimension") {
    for (int rep = 0; rep < 50; ++rep) {
        RngStream s(7, rep);
        const int n = 40;
        Eigen::VectorXd y = gaussian_vector(s, n);
        for (int i = 0; i < 5; ++i) y[i] += 2.0 + 2.0 * s.uniform();
        int prev = n;
        for (double K : {1.05, 1.1, 1.5, 2.0, 4.0}) {
            const int d = select_nonzero(y, 12, PenaltyRule::kl(K)).m_hat.dim;
            CHECK(d <= prev);
            prev = d;
        }
    }
}

TEST_CASE("selection is invariant under rescaling") {
    for (int rep = 0; rep < 30; ++rep) {
        RngStream s(8, rep);
        const int n = 20;
        Eigen::VectorXd y = gaussian_vector(s, n);
        y[0] += 4.0;
        const auto a = select_changepoints(y, 4, PenaltyRule::kl(1.1), weight_fn(CollectionSpec::change_points(n, 4)));
        const auto b =
            select_changepoints(7.0 * y, 4, PenaltyRule::kl(1.1), weight_fn(CollectionSpec::change_points(n, 4)));
        CHECK(a.m_hat == b.m_hat);
    }
}

TEST_CASE("ordered selector on orthonormal columns") {
    const int n = 12;
    Eigen::MatrixXd X = Eigen::MatrixXd::Identity(n, 4);
    Eigen::VectorXd y = X.col(0) * 10.0;
    const auto spec = CollectionSpec::ordered(n, 4, 4);
    const auto out = select_ordered(y, X, 4, PenaltyRule::kl(1.1), weight_fn(spec));
    CHECK(out.m_hat == ModelKey::columns({0}, n));
    CHECK(select_ordered(y, X, 0, PenaltyRule::kl(1.1), weight_fn(spec)).m_hat.dim == 0);
}

TEST_CASE("complete selector handles duplicated columns") {
    RngStream s(9, 0);
    const int n = 12;
    Eigen::MatrixXd X = gaussian_matrix(s, n, 5);
    X.col(3) = X.col(1);
    const Eigen::VectorXd y = 5.0 * X.col(1) + 0.1 * gaussian_vector(s, n);
    const auto spec = CollectionSpec::complete(n, 5, 3);
    const auto out = select_complete(y, X, 3, PenaltyRule::kl(1.1), weight_fn(spec), 1000);
    const auto c = out.m_hat.content();
    CHECK_FALSE((std::find(c.begin(), c.end(), 1) != c.end() && std::find(c.begin(), c.end(), 3) != c.end()));
    CHECK_THROWS_AS(select_complete(y, X, 3, PenaltyRule::kl(1.1), weight_fn(spec), 10), BudgetExceeded);
}

TEST_CASE("change-point selector") {
    const int n = 20;
    CHECK(select_changepoints(Eigen::VectorXd::Constant(n, 3.0), 4, PenaltyRule::kl(1.1),
                              weight_fn(CollectionSpec::change_points(n, 4)))
              .m_hat.dim == 1);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    y.tail(10).setConstant(5.0);
    const auto out = select_changepoints(y, 4, PenaltyRule::kl(1.1), weight_fn(CollectionSpec::change_points(n, 4)));
    CHECK(out.m_hat == ModelKey::change_points({10}, n));
    CHECK_THROWS_AS(select_changepoints(y, n - 2, PenaltyRule::kl(1.1), weight_fn(CollectionSpec::change_points(n, 4))),
                    DomainError);
}

TEST_CASE("partition selector") {
    const int n = 30;
    Eigen::MatrixXd t(n, 1);
    for (int i = 0; i < n; ++i) t(i, 0) = (i + 0.5) / n;
    const auto out = select_partition(Eigen::VectorXd::Constant(n, 2.0), t, 1, PenaltyRule::kl(1.1),
                                      weight_fn(CollectionSpec::partition(n, 1)));
    CHECK(out.criterion_value == 0.0);
    INFO(out.m_hat.to_string());
    CHECK(out.m_hat == ModelKey::partition(0, {1}, n));
    CHECK(out.evaluated == 28 + 14 + 9);
}
