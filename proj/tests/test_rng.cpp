#include <cmath>
#include <numeric>

#include "doctest.h"
#include "gmsel/rng.hpp"

using namespace gmsel;

TEST_CASE("philox known-answer vectors") {
    const auto zero = philox4x32({0, 0, 0, 0}, {0, 0});
    CHECK(zero[0] == 0x6627e8d5u);
    CHECK(zero[1] == 0xe169c58du);
    CHECK(zero[2] == 0xbc57ac4cu);
    CHECK(zero[3] == 0x9b00dbd8u);
    const auto pi = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                               {0xa4093822u, 0x299f31d0u});
    CHECK(pi[0] == 0xd16cfe09u);
    CHECK(pi[1] == 0x94fdccebu);
    CHECK(pi[2] == 0x5001e420u);
    CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("streams are reproducible and distinct") {
    RngStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
    bool differs_c = false, differs_d = false;
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next_u64();
        CHECK(va == b.next_u64());
        differs_c |= va != c.next_u64();
        differs_d |= va != d.next_u64();
    }
    CHECK(differs_c);
    CHECK(differs_d);
}

TEST_CASE("uniform stays inside the open interval") {
    RngStream s(1, 0);
    for (int i = 0; i < 100000; ++i) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("sample_gaussian moments") {
    RngStream s(2024, 0);
    CHECK(sample_gaussian(s, 0).empty());
    const auto v = sample_gaussian(s, 1000000);
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= (v.size() - 1);
    CHECK(std::abs(mean) < 4e-3);
    CHECK(std::abs(var - 1.0) < 6e-3);
}

TEST_CASE("chi-square draws have the right mean and variance") {
    RngStream s(5, 3);
    for (double k : {1.0, 3.0, 10.0}) {
        const int m = 400000;
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < m; ++i) {
            const double x = s.chisq(k);
            sum += x;
            sq += x * x;
        }
        const double mean = sum / m;
        const double var = sq / m - mean * mean;
        CHECK(std::abs(mean - k) < 4.0 * std::sqrt(2.0 * k / m));
        CHECK(std::abs(var - 2.0 * k) < 0.05 * 2.0 * k);
    }
}
