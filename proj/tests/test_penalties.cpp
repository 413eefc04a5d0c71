#include <cmath>
#include <thread>
#include <vector>

#include "doctest.h"
#include "gmsel/errors.hpp"
#include "gmsel/numerics.hpp"
#include "gmsel/penalties.hpp"

using namespace gmsel;

namespace {
bool rel_close(double got, double want, double tol) {
    return std::abs(got - want) <= tol * std::abs(want);
}
}  // namespace

TEST_CASE("phi and its inverse") {
    CHECK(phi(1.0) == 0.0);
    CHECK(std::abs(phi(2.0) - 0.1534) < 1e-4);
    CHECK(rel_close(phi(std::exp(1.0)), (std::exp(1.0) - 2.0) / 2.0, 1e-14));
    CHECK_THROWS_AS(phi(0.5), DomainError);
    CHECK(phi_inv(0.0) == 1.0);
    CHECK(std::abs(phi_inv(phi(2.0)) - 2.0) < 1e-9);
    const double v = phi_inv(std::log(512.0));
    CHECK(rel_close(v, 16.265708360255218581, 1e-12));
    // phi_inv(a) is the root of x = 2a + 1 + log x, so it exceeds 2a.
    CHECK(rel_close(v, 2.0 * std::log(512.0) + 1.0 + std::log(v), 1e-12));
    CHECK(v > 2.0 * std::log(512.0));
    for (double x : {1.001, 1.5, 3.0, 40.0, 1e4}) CHECK(rel_close(phi_inv(phi(x)), x, 1e-9));
}

TEST_CASE("pen_kl") {
    CHECK(pen_kl(1.1, 0.0, 3, 20) == 0.0);
    const double L = log_binomial(32, 2) + 2.0 * std::log(3.0);
    CHECK(rel_close(pen_kl(1.1, L, 2, 32), 29.234541197079141013, 1e-9));
    CHECK(rel_close(pen_kl(1.1, 10.0, 5, 100), 34.683918610230712772, 1e-9));
    CHECK_THROWS_AS(pen_kl(1.1, 1.0, 9, 10), DomainError);
    CHECK_THROWS_AS(pen_kl(1.0, 1.0, 2, 10), DomainError);
    double prev = 0.0;
    for (double l : {0.0, 0.1, 1.0, 5.0, 20.0, 100.0, 600.0, 5000.0}) {
        const double v = pen_kl(1.5, l, 4, 40);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("pen_kl_upper") {
    CHECK(rel_close(pen_kl_upper(1.1, 10.0, 5, 100), 94.819732231338562195, 1e-12));
    // D = 0, L = 0: the bracket is 1.
    CHECK(rel_close(pen_kl_upper(2.0, 0.0, 0, 10), 3.0 * 2.0 * 10.0 / 9.0, 1e-14));
    CHECK_THROWS_AS(pen_kl_upper(1.1, 1.0, 1, 7), DomainError);
    CHECK_THROWS_AS(pen_kl_upper(1.1, 1.0, 0, 3), DomainError);
    for (int n : {10, 30, 100}) {
        for (int D = 0; D <= n - 7; D += 3) {
            for (double L : {0.0, 1.0, 10.0, 100.0}) {
                CHECK(pen_kl(1.3, L, D, n) <= pen_kl_upper(1.3, L, D, n));
            }
        }
    }
}

TEST_CASE("classical penalties") {
    CHECK(pen_classical(ClassicalKind::FPE, 3, 10) == 6.0);
    CHECK(pen_classical(ClassicalKind::AIC, 0, 17) == 0.0);
    for (int n : {10, 32, 512}) {
        for (int D = 0; D < n; D += 3) {
            const double N = n - D;
            CHECK(pen_classical(ClassicalKind::AMDL, D, n) >= 3.0 * N * D * std::log(n) / n);
            CHECK(pen_classical(ClassicalKind::AIC, D, n) >= 2.0 * N * D / n);
            CHECK(pen_classical(ClassicalKind::BIC, D, n) >= 0.0);
        }
    }
    CHECK_THROWS_AS(pen_classical(ClassicalKind::AIC, 10, 10), DomainError);
}

TEST_CASE("pen_convert") {
    CHECK(pen_convert(0.0, 3, 10, PenDirection::ToPrime) == 0.0);
    CHECK(pen_convert(0.0, 3, 10, PenDirection::FromPrime) == 0.0);
    for (double pen : {0.3, 2.0, 17.0, 300.0}) {
        const double p = pen_convert(pen, 4, 30, PenDirection::ToPrime);
        CHECK(rel_close(pen_convert(p, 4, 30, PenDirection::FromPrime), pen, 1e-12));
        const double q = pen_convert(pen, 4, 30, PenDirection::FromPrime);
        CHECK(rel_close(pen_convert(q, 4, 30, PenDirection::ToPrime), pen, 1e-12));
    }
    const int n = 64, D = 5;
    CHECK(rel_close(pen_convert(D * std::log(n), D, n, PenDirection::FromPrime),
                    pen_classical(ClassicalKind::BIC, D, n), 1e-12));
}

TEST_CASE("pen_minimal and hka_check") {
    CHECK(pen_minimal(1.5, 2.0, 0) == 0.0);
    CHECK(rel_close(pen_minimal(std::sqrt(2.0), 0.0, 10), 20.0, 1e-12));
    for (int n : {3, 10, 100, 10000}) {
        const double x = phi_inv(std::log(n));
        CHECK(rel_close(pen_minimal(1.2, std::log(n), 7), 1.44 * 7 * x, 1e-12));
        CHECK(x <= 2.0 * std::log(n) + 1.0 + std::log(x) + 1e-9);
    }
    const auto r = hka_check(std::sqrt(2.0), 1.0, 0.0, 100, 10);
    CHECK(r.feasible);
    CHECK(std::abs(r.gamma1 - 5.83) < 0.01);
    CHECK(std::abs(r.gamma2 - 0.394) < 0.001);
    CHECK(r.d_max == std::min(100 - 6, static_cast<int>(std::floor(r.gamma2 * 102 - 1))));
    CHECK(r.request_ok);
    CHECK(r.residual_constant > 0.0);
    const auto big = hka_check(std::sqrt(2.0), 1.0, std::log(1e6), 1000000, 0);
    CHECK(big.feasible);
    CHECK(big.d_max <= 1000000 - 5.7 * std::log(1e6));
    for (double K : {1.01, 1.1, 2.0, 5.0}) {
        for (double a : {0.0, 0.5, 3.0}) {
            const auto h = hka_check(K, 1.0, a, 50, 1);
            if (h.feasible) CHECK(h.gamma2 <= 0.5);
        }
    }
    const auto tiny = hka_check(1.0001, 1.0, 0.0, 50, 1);
    CHECK(tiny.feasible);
    CHECK(tiny.d_max == 0);
    CHECK_FALSE(tiny.request_ok);
}

TEST_CASE("Kullback penalties") {
    CHECK(pen_kullback(2.0, 3.0, 0.0, 3, 30) == 0.0);
    CHECK(rel_close(pen_kullback(2.0, 2.0, 5.0, 3, 50), 56.574896093688665063, 1e-9));
    CHECK(rel_close(pen_kullback_upper(2.0, 2.0, 0.0, 1, 20), 100.89519384216075321, 1e-12));
    CHECK_THROWS_AS(pen_kullback_upper(2.0, 2.0, 1.0, 2, 10), DomainError);
    CHECK_THROWS_AS(pen_kullback(2.0, 1.5, 1.0, 2, 10), DomainError);
    for (int n : {12, 30, 80}) {
        for (int D = 1; D <= n - 9; D += 2) {
            for (double L : {0.0, 2.0, 20.0}) {
                CHECK(pen_kullback(1.5, 2.5, L, D, n) <= pen_kullback_upper(1.5, 2.5, L, D, n));
            }
        }
    }
}

TEST_CASE("PenaltyRule and evaluator") {
    CHECK(PenaltyRule::fpe()(4, 9.0, 20) == 8.0);
    CHECK(PenaltyRule::kullback(2.0).K2 == 3.0);
    CHECK(PenaltyRule::user_table({{0, 0.0}, {1, 3.5}})(1, 0.0, 10) == 3.5);
    CHECK_THROWS_AS(PenaltyRule::user_table({{0, 0.0}})(2, 0.0, 10), DomainError);
    const PenaltyEvaluator ev(PenaltyRule::kl(1.1), 32);
    const double L = log_binomial(32, 2) + 2.0 * std::log(3.0);
    std::vector<std::thread> workers;
    std::vector<double> got(4);
    for (int i = 0; i < 4; ++i) workers.emplace_back([&, i] { got[i] = ev(2, L); });
    for (auto& w : workers) w.join();
    for (double g : got) CHECK(g == pen_kl(1.1, L, 2, 32));
}
