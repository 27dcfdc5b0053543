#include "doctest.h"
#include "oracles.hpp"

#include "resonance/arith.hpp"
#include "resonance/error.hpp"
#include "resonance/modform.hpp"
#include "resonance/resonator.hpp"

#include <random>

using namespace resonance;

namespace {

ResonatorSpec custom_spec(std::int64_t N) {
    ResonatorSpec s;
    s.scheme = Scheme::custom;
    s.N = N;
    return s;
}

} // namespace

TEST_CASE("Kloosterman goldens") {
    CHECK(kloosterman(1, 1, 1) == 1.0);
    CHECK(std::fabs(kloosterman(1, 1, 3) - (-1.0)) <= 1e-12);
    CHECK(std::fabs(kloosterman(2, 3, 5) - (2.0 - 2.0 * std::cos(std::numbers::pi / 5))) <= 1e-12);
    CHECK_THROWS_AS(kloosterman(1, 1, 0), DomainError);
    CHECK_THROWS_AS(kloosterman(1, 1, 1'000'001), ResourceError);
}

TEST_CASE("Kloosterman symmetry, Weil-type size and the naive oracle") {
    for (std::int64_t m = 1; m <= 20; ++m)
        for (std::int64_t n = m; n <= 20; ++n)
            for (std::int64_t c = 1; c <= 500; c += (c < 60 ? 1 : 7)) {
                const double s = kloosterman(m, n, c);
                REQUIRE(std::fabs(s - kloosterman(n, m, c)) <= 1e-9);
                REQUIRE(std::fabs(s) <= c + 1e-9);
            }
    for (auto [m, n, c] : std::vector<std::array<std::int64_t, 3>>{{1, 1, 7}, {2, 5, 12}, {3, 3, 30}, {7, 11, 97}, {4, 6, 64}}) {
        const auto ref = oracle::kloosterman_naive(m, n, c);
        CHECK(std::fabs(ref.imag()) <= 1e-9);
        CHECK(kloosterman(m, n, c) == doctest::Approx(ref.real()).epsilon(1e-10));
    }
}

TEST_CASE("Bessel series") {
    CHECK(bessel_j(0, 0.0).value == 1.0);
    for (int nu = 1; nu <= 5; ++nu) CHECK(bessel_j(nu, 0.0).value == 0.0);

    const auto j11 = bessel_j(11, 1.0);
    double fact = 1.0;
    for (int i = 2; i <= 11; ++i) fact *= i;
    CHECK(j11.paper_bound == doctest::Approx(std::exp(0.5) * std::pow(0.5, 11) / fact).epsilon(1e-14));
    CHECK(std::fabs(j11.value) <= j11.paper_bound);

    CHECK(bessel_j(1, 1.0).value == doctest::Approx(oracle::bessel_quadrature(1, 1.0)).epsilon(1e-10));
    CHECK(bessel_j(1, 1.0).value == doctest::Approx(0.4400506).epsilon(1e-7));
    for (auto [nu, x] : std::vector<std::pair<int, double>>{{0, 1.5}, {2, 5.0}, {7, 12.0}, {15, 30.0}, {40, 60.0}, {40, 82.0}, {127, 250.0}})
        CHECK(std::fabs(bessel_j(nu, x).value - oracle::bessel_quadrature(nu, x)) <= 1e-11);

    CHECK_THROWS_AS(bessel_j(3, 8.5), DomainError);
    CHECK_THROWS_AS(bessel_j(3, -0.1), DomainError);
}

TEST_CASE("Bessel value below its bound on the test grid") {
    int points = 0;
    for (int order = 0; order <= 127; order += 3)
        for (int j = 0; j <= 23; ++j) {
            const double x = 2.0 * (order + 1) * j / 23.0;
            const auto b = bessel_j(order, x);
            REQUIRE(std::fabs(b.value) <= b.paper_bound * (1 + 1e-12));
            ++points;
        }
    CHECK(points >= 1000);
}

TEST_CASE("Petersson right-hand side at k = 128") {
    int cases = 0;
    for (std::int64_t m = 1; m <= 2; ++m)
        for (std::int64_t n = 1; n <= 2; ++n) {
            if (4 * std::numbers::pi * std::sqrt(double(m * n)) > 12.8) continue;
            ++cases;
            PeterssonParams p{128, m, n, 0};
            CHECK(p.in_regime());
            const auto r = petersson_rhs(p);
            CHECK(r.delta == (m == n ? 1 : 0));
            CHECK(std::fabs(r.value - r.delta) <= 1e-10);
            CHECK(r.tail_bound <= kPeterssonTailTarget);
            CHECK(r.c_max >= 1);
        }
    CHECK(cases == 1);
    const auto fixed = petersson_rhs({128, 1, 1, 50});
    CHECK(fixed.c_max == 50);
    CHECK(std::fabs(fixed.value - 1.0) <= 1e-10);
    CHECK(std::fabs(petersson_rhs({128, 1, 2, 50}).value) <= 1e-10);
}

TEST_CASE("Petersson tail contract under doubling") {
    for (int k : {16, 64, 128})
        for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 3}}) {
            for (std::int64_t c : {1, 3, 10, 40}) {
                const auto a = petersson_rhs({k, m, n, c});
                const auto b = petersson_rhs({k, m, n, 2 * c});
                REQUIRE(std::fabs(a.value - b.value) <= a.tail_bound);
            }
        }
}

TEST_CASE("weight 16 is positive") {
    const auto r = petersson_rhs({16, 1, 1, 0});
    MESSAGE("k=16 rhs " << r.value << " c_max " << r.c_max);
    CHECK(r.value > 0.0);
    CHECK(std::isfinite(r.value));
    CHECK_FALSE(r.in_regime);
}

TEST_CASE("Petersson parameter checks") {
    CHECK_THROWS_AS(petersson_rhs({13, 1, 1, 0}), DomainError);
    CHECK_THROWS_AS(petersson_rhs({10, 1, 1, 0}), DomainError);
    CHECK_THROWS_AS(petersson_rhs({12, 0, 1, 0}), DomainError);
    CHECK_THROWS_AS(petersson_rhs({12, 10, 10, 0}), DomainError);
    // sign of i^k
    const auto a = petersson_rhs({16, 1, 1, 1});
    const auto b = petersson_rhs({18, 1, 1, 1});
    CHECK((a.value - 1.0) * kloosterman(1, 1, 1) * bessel_j(15, 4 * std::numbers::pi).value > 0);
    CHECK((b.value - 1.0) * kloosterman(1, 1, 1) * bessel_j(17, 4 * std::numbers::pi).value < 0);
    CHECK(petersson_tail_bound(128, 1, 1, 10) < petersson_tail_bound(128, 1, 1, 5));
}

TEST_CASE("V weight") {
    CHECK(std::fabs(weight_v(0.1, 40) - 1.0) <= 1e-6);
    const double v100 = weight_v(100.0, 40);
    CHECK(v100 <= 2.0 * std::pow(40.0 / (200.0 * std::numbers::pi), 20));
    CHECK(v100 >= 0.0);
    for (double x : {0.1, 1.0, 3.0, 5.0, 10.0, 100.0}) {
        const double base = weight_v(x, 40);
        CHECK(std::fabs(weight_v_quadrature(x, 40, 2.0, 1.0) - base) <= 1e-10);
        CHECK(std::fabs(weight_v_quadrature(x, 40, 1.0, 0.5) - base) <= 1e-10);
    }
    for (int k : {12, 24, 40, 128, 400})
        for (double x : {0.05, 0.5, 2.0, 8.0, 30.0}) {
            const double ref = oracle::weight_v_closed(x, k);
            CHECK(std::fabs(weight_v(x, k) - ref) <= 1e-10);
        }
    CHECK_THROWS_AS(weight_v(1.0, 402), DomainError);
    CHECK_THROWS_AS(weight_v(1.0, 13), DomainError);
    CHECK_THROWS_AS(weight_v(0.0, 40), DomainError);
}

TEST_CASE("Hecke index expansion") {
    CHECK(hecke_expand(6, 4) == std::vector<std::int64_t>{6, 24});
    CHECK(hecke_expand(5, 7) == std::vector<std::int64_t>{35});
    CHECK(hecke_expand(12, 12) == std::vector<std::int64_t>{1, 4, 9, 16, 36, 144});
    CHECK(hecke_expand(7, 7) == std::vector<std::int64_t>{1, 49});
    for (std::int64_t m = 1; m <= 60; ++m)
        for (std::int64_t n = 1; n <= 60; ++n)
            REQUIRE(hecke_expand(m, n).size() == arith::divisors(arith::gcd(m, n)).size());
}

TEST_CASE("modular form diagonal") {
    const auto one = CoefficientTable::from_entries(custom_spec(1), {{1, 1.0}});
    CHECK(m2_modform_diagonal(one, 12).sum_exact == 1.0);

    for (double x : {0.4, -0.4}) {
        const double p = 11.0;
        const auto t = CoefficientTable::from_entries(custom_spec(11), {{1, 1.0}, {11, x}});
        const auto d = m2_modform_diagonal(t, 12);
        const double expect = 1 + x * x * (1 + 1 / p) + 2 * x / std::sqrt(p);
        CHECK(d.sum_exact == doctest::Approx(expect).epsilon(1e-14));
        CHECK(d.euler_approx == doctest::Approx(expect).epsilon(1e-14));
    }

    ResonatorSpec s;
    s.scheme = Scheme::dirichlet_f;
    s.N = 1000;
    s.window = desk_window(1000);
    const auto d = m2_modform_diagonal(build_table(s), 12);
    MESSAGE("N=1000 sum/euler " << d.ratio);
    CHECK(d.ratio == doctest::Approx(d.sum_exact / d.euler_approx));
    CHECK(d.ratio >= 0.9);
    CHECK(d.ratio <= 1.1);
    CHECK_FALSE(d.admissible);
    CHECK_THROWS_AS(m2_modform_diagonal(one, 11), DomainError);
}
