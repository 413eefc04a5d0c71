#include <cmath>
#include <vector>

#include "doctest.h"
#include "gmsel/dkhi.hpp"
#include "gmsel/errors.hpp"
#include "gmsel/numerics.hpp"

using namespace gmsel;

namespace {
bool rel_close(double got, double want, double tol) {
    return std::abs(got - want) <= tol * std::abs(want);
}
}  // namespace

TEST_CASE("dkhi reference values") {
    CHECK(dkhi(4, 9, 0.0) == 1.0);
    CHECK(rel_close(dkhi(2, 10, 5.0), 0.13168724279835390947, 1e-10));
    CHECK(rel_close(dkhi(3, 20, 7.0), 0.078972296217795317895, 1e-10));
    // Reference from quadrature of the defining expectation.
    CHECK(rel_close(dkhi(20, 60, 5.0), 0.750021114877684, 1e-10));
    const double far = dkhi(3, 20, 1e4);
    CHECK(far >= 0.0);
    CHECK(far < 1e-6);
    CHECK_THROWS_AS(dkhi(0, 5, 1.0), DomainError);
}

TEST_CASE("fish reference values") {
    CHECK(fish(3, 7, 0.0) == 1.0);
    CHECK(rel_close(fish(2, 10, 3.0), 0.152587890625, 1e-10));
    CHECK(rel_close(fish(4, 12, 2.5), 0.10314970808230707269, 1e-10));
    CHECK(rel_close(fish(1, 3, 1.0), 0.811997041392306, 1e-10));
    CHECK_THROWS_AS(fish(2, 2, 1.0), DomainError);
}

TEST_CASE("dkhi and fish are strictly decreasing") {
    for (int D = 1; D <= 20; D += 3) {
        for (int N = 3; N <= 60; N += 7) {
            double pd = 1.0, pf = 1.0;
            for (double x : {0.1, 1.0, 5.0, 20.0, 100.0}) {
                const double vd = dkhi(D, N, x), vf = fish(D, N, x);
                CHECK(vd < pd);
                CHECK(vf < pf);
                pd = vd;
                pf = vf;
            }
        }
    }
}

TEST_CASE("edkhi and efish invert") {
    CHECK(edkhi(3, 9, 1.0) == 0.0);
    CHECK(efish(3, 9, 1.0) == 0.0);
    CHECK(efish(3, 9, 2.0) == 0.0);
    CHECK(std::abs(edkhi(3, 20, dkhi(3, 20, 7.0)) - 7.0) < 1e-6);
    CHECK(std::abs(efish(4, 12, fish(4, 12, 2.5)) - 2.5) < 1e-6);
    CHECK_THROWS_AS(edkhi(3, 9, 0.0), DomainError);
    CHECK_THROWS_AS(edkhi(3, 9, 1.5), DomainError);
    CHECK_THROWS_AS(efish(3, 9, 0.0), DomainError);
    CHECK_THROWS_AS(efish(3, 9, -1.0), DomainError);
}

TEST_CASE("small-q branch dominates the exact inverse") {
    const double log_q = -600.0;
    const double bound = edkhi_log(3, 50, log_q);
    CHECK(rel_close(bound, 1398424348370.745988, 1e-11));
    CHECK(bound >= 1398424348369.8200625);
    // D = 1 has no bound branch and is solved exactly.
    const double x1 = edkhi_log(1, 30, -800.0);
    CHECK(std::abs(log_dkhi(1, 30, x1) + 800.0) < 1e-9 * 800.0);
    // Fish counterpart: the bound root must not fall below the exact root.
    const double fb = efish_log(3, 40, -700.0);
    CHECK(std::isfinite(fb));
    CHECK(log_fish(3, 40, fb) <= -700.0 + 1e-9);
}

TEST_CASE("dkhi bound lines") {
    const auto b = dkhi_bounds(4, 30, 20.0);
    CHECK(rel_close(b.beta_form, 0.00255780631609344, 1e-12));
    CHECK(rel_close(b.fisher_form, 0.00278349510868992, 1e-12));
    CHECK(rel_close(b.exp_form, 0.0526224747444241, 1e-12));
    CHECK(dkhi_upper(4, 30, 20.0) == b.beta_form);
    CHECK_THROWS_AS(dkhi_upper(1, 30, 20.0), DomainError);
    CHECK_THROWS_AS(dkhi_upper(4, 30, 3.0), DomainError);
    const auto f = fish_bounds(4, 12, 3.0);
    CHECK(rel_close(f.beta_form, 0.08203125, 1e-12));
    CHECK(rel_close(f.fisher_form, 0.09375, 1e-12));
    CHECK_THROWS_AS(fish_upper(4, 12, 1.1), DomainError);
}

TEST_CASE("bounds dominate on their validity regions") {
    // The bounds are tight (equal) at D = 2 and at the left endpoint, so a
    // few ulps of rounding slack are allowed.
    for (int D : {2, 3, 5, 10, 20}) {
        for (int N : {3, 5, 10, 30, 60}) {
            for (double s : {1.0, 1.5, 3.0, 10.0, 40.0}) {
                const double x = D * s;
                CHECK(dkhi_upper(D, N, x) >= dkhi(D, N, x) * (1.0 - 1e-12));
                const double xf = s * N / (N - 2.0);
                CHECK(fish_upper(D, N, xf) >= fish(D, N, xf) * (1.0 - 1e-12));
            }
            CHECK(std::isfinite(dkhi_upper(D, N, D)));
            CHECK(std::isfinite(fish_upper(D, N, static_cast<double>(N) / (N - 2))));
        }
    }
}

TEST_CASE("Monte Carlo estimators") {
    RngStream s(11, 0);
    const auto at0 = dkhi_mc(3, 10, 0.0, 10000, s);
    CHECK(at0.estimate == 1.0);
    CHECK(at0.std_error == 0.0);
    const auto mc = dkhi_mc(2, 10, 5.0, 400000, s);
    CHECK(std::abs(mc.estimate - dkhi(2, 10, 5.0)) < 4.0 * mc.std_error);
    const auto far = dkhi_mc(2, 10, 1e4, 10000, s);
    CHECK(far.estimate < 1e-3);
    const auto fd = fish_mc(2, 10, 3.0, 400000, s);
    CHECK(std::abs(fd.estimate - fish(2, 10, 3.0)) < 4.0 * fd.std_error);
    const auto fc = fish_mc(2, 3, 3.0, 100000, s, FishMcMethod::Conditional);
    CHECK(std::abs(fc.estimate - fish(2, 3, 3.0)) < 4.0 * fc.std_error);
}

TEST_CASE("inverse chi-square moments") {
    CHECK(inv_chisq_moment(10, 1) == doctest::Approx(1.0 / 8.0));
    CHECK(inv_chisq_moment(10, 2) == doctest::Approx(1.0 / 48.0));
    CHECK_THROWS_AS(inv_chisq_moment(4, 2), DomainError);
    RngStream s(3, 1);
    const auto mc = inv_chisq_moment_mc(20, 2, 200000, s);
    CHECK(std::abs(mc.estimate - inv_chisq_moment(20, 2)) < 4.0 * mc.std_error);
}
