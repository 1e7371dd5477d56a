#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "gwsep/bounds.hpp"
#include "gwsep/errors.hpp"

using namespace gwsep;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

// Ceilings worked out by hand for the grid margins.
const std::map<double, int> kSqrtCeil{{0.5, 2}, {0.2, 4}, {0.1, 5}, {0.05, 7}, {0.02, 10}, {0.005, 20}};
const std::map<double, int> kLogCeil{{0.5, 2}, {0.2, 4}, {0.1, 5}, {0.05, 6}, {0.02, 7}, {0.005, 9}};

/// log10 of [840 r s]^{-r s / 2} / (9 sqrt L), in 50-digit arithmetic.
double oracle_gamma_prime(int r, int s, int L)
{
    const Big rs = Big(r) * s;
    const Big v = pow(Big(840) * rs, -rs / 2) / (Big(9) * sqrt(Big(L)));
    return static_cast<double>(log10(v));
}

double oracle_gamma1(int r1, int s, int K)
{
    const Big rs = Big(r1) * s;
    const Big v = pow(Big(376) * rs, -rs / 2) / (Big(2) * sqrt(Big(K)));
    return static_cast<double>(log10(v));
}

double oracle_gamma2(int r, int s, int K)
{
    const Big base = pow(Big(2), s + 1) * r * (K - 1) * (4 * s + 2);
    const Big expo = -(Big(s) + Big(1) / 2) * r * (K - 1);
    const Big v = pow(base, expo) / (Big(4) * sqrt(Big(K)) * (4 * K - 5) * pow(Big(2), K - 1));
    return static_cast<double>(log10(v));
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("ceiling helpers")
{
    for (const auto& [gamma, s] : kLogCeil) CHECK(ceil_log2_two_over(gamma) == s);
    CHECK(ceil_quarter_log2(1) == 0);
    CHECK(ceil_quarter_log2(16) == 1);
    CHECK(ceil_quarter_log2(17) == 2);
    CHECK(ceil_quarter_log2(33) == 2);
    CHECK(ceil_quarter_log2(257) == 3);
}

TEST_CASE("transformed margin examples")
{
    const auto a = transformed_margin(0.5, 1);
    CHECK(a.r == 2);
    CHECK(a.s == 2);
    REQUIRE(a.gamma_prime.has_value());
    CHECK(*a.gamma_prime == doctest::Approx(1.0 / (3360.0 * 3360.0 * 9.0)).epsilon(1e-12));

    const auto b = transformed_margin(0.005, 3);
    CHECK(b.r == 3);
    CHECK(b.s == 20);
    CHECK(b.base == 50400.0);
    CHECK(b.exponent == -30.0);
    CHECK(b.log10_gamma_prime() == doctest::Approx(oracle_gamma_prime(3, 20, 3)).epsilon(1e-12));

    CHECK_THROWS_AS(transformed_margin(0.0, 2), InvalidInput);
    CHECK_THROWS_AS(transformed_margin(0.5, 0), InvalidInput);
}

TEST_CASE("underflow is reported in log space")
{
    const auto m = transformed_margin(0.001, 8);
    CHECK_FALSE(m.gamma_prime.has_value());
    CHECK(std::isfinite(m.log_gamma_prime));
}

TEST_CASE("grid values against a 50-digit oracle")
{
    const std::map<int, int> r_of_L{{2, 3}, {3, 3}, {4, 4}};
    const std::map<int, int> r1_of_K{{9, 4}, {16, 5}, {32, 6}};
    for (const auto& [gamma, s] : kSqrtCeil) {
        if (gamma == 0.005) continue;
        for (auto [L, K] : {std::pair{2, 9}, {3, 9}, {3, 16}, {4, 32}}) {
            const auto ours = transformed_margin(gamma, L);
            CHECK(ours.s == s);
            CHECK(ours.r == r_of_L.at(L));
            CHECK(ours.log10_gamma_prime() == doctest::Approx(oracle_gamma_prime(r_of_L.at(L), s, L)).epsilon(1e-10));

            const auto theirs = bpstwz_margins(gamma, K);
            CHECK(theirs.r1 == r1_of_K.at(K));
            CHECK(theirs.r2 == 5);
            CHECK(theirs.s2 == kLogCeil.at(gamma));
            CHECK(theirs.log_gamma1 / std::log(10.0) == doctest::Approx(oracle_gamma1(theirs.r1, s, K)).epsilon(1e-10));
            CHECK(theirs.log_gamma2 / std::log(10.0) ==
                  doctest::Approx(oracle_gamma2(5, kLogCeil.at(gamma), K)).epsilon(1e-10));
            CHECK(ours.log_gamma_prime > theirs.log_best());
        }
    }
}

TEST_CASE("monotonicity")
{
    double prev = 0.0;
    for (double gamma : {0.9, 0.5, 0.2, 0.1, 0.05, 0.02, 0.01}) {
        const double v = transformed_margin(gamma, 3).log_gamma_prime;
        CHECK(v <= prev);
        prev = v;
    }
    prev = 0.0;
    for (int L = 1; L <= 16; ++L) {
        const double v = transformed_margin(0.1, L).log_gamma_prime;
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("comparison margins")
{
    const auto a = bpstwz_margins(0.5, 2);
    CHECK(a.r1 == 1);
    CHECK(a.s1 == 2);
    CHECK(std::exp(a.log_gamma1) == doctest::Approx(1.0 / (752.0 * 2.0 * std::sqrt(2.0))).epsilon(1e-12));
    CHECK(a.log_best() == a.log_gamma1);

    double prev = 0.0;
    for (int K = 2; K <= 64; ++K) {
        const double v = bpstwz_margins(0.1, K).log_gamma1;
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(bpstwz_margins(0.5, 1), InvalidInput);
}

TEST_CASE("mistake bound")
{
    CHECK(mistake_bound(5, 1.0, 0.5) == 64);
    CHECK(mistake_bound(1, 1.0, 0.01) == 0);
    CHECK(mistake_bound(5, 1.0, 0.3) == 4 * 44);  // floor(4 / 0.09) = 44
    CHECK(mistake_bound(3, std::sqrt(2.0), 0.5) == 2 * 32);
    CHECK(mistake_bound(2, 1.0, 2.0) == 1);
    CHECK_THROWS_AS(mistake_bound(3, 1.0, 1e-12), ResourceLimit);
    CHECK_THROWS_AS(mistake_bound(0, 1.0, 0.5), InvalidInput);
}

TEST_CASE("mistake bound from a log margin")
{
    const auto small = mistake_bound_from_log(5, 1.0, std::log(0.5));
    REQUIRE(small.exact.has_value());
    CHECK(*small.exact == 64);
    CHECK(small.log10_value == doctest::Approx(std::log10(64.0)));

    const auto m = transformed_margin(0.2, 3);
    const auto huge = mistake_bound_from_log(9, std::sqrt(2.0), m.log_gamma_prime);
    CHECK_FALSE(huge.exact.has_value());
    const double expected = std::log10(8.0) + std::log10(8.0) - 2.0 * m.log10_gamma_prime();
    CHECK(huge.log10_value == doctest::Approx(expected).epsilon(1e-12));

    CHECK(mistake_bound_from_log(1, 1.0, -100.0).exact == 0u);
}

TEST_CASE("advantage over the comparison grows with K")
{
    // With L fixed, gamma' does not depend on K while both comparison margins shrink.
    double prev_gap = -std::numeric_limits<double>::infinity();
    for (int K : {4, 8, 16, 32, 64}) {
        const double gap = transformed_margin(0.1, 3).log_gamma_prime - bpstwz_margins(0.1, K).log_best();
        CHECK(gap > prev_gap);
        prev_gap = gap;
    }
}

}
