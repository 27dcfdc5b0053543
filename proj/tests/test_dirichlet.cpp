#include "doctest.h"
#include "oracles.hpp"

#include "resonance/arith.hpp"
#include "resonance/dirichlet.hpp"
#include "resonance/error.hpp"
#include "resonance/resonator.hpp"

#include <random>
#include <sstream>

using namespace resonance;

namespace {

ResonatorSpec custom_spec(std::int64_t N) {
    ResonatorSpec s;
    s.scheme = Scheme::custom;
    s.N = N;
    return s;
}

ResonatorSpec desk(Scheme scheme, std::int64_t N) {
    ResonatorSpec s;
    s.scheme = scheme;
    s.N = N;
    s.window = desk_window(N);
    return s;
}

} // namespace

TEST_CASE("W weight against its closed form") {
    CHECK(std::fabs(weight_w(1e-6) - 1.0) <= 1e-2);
    CHECK(std::fabs(weight_w(20.0)) * std::exp(20.0) <= 100.0);
    const double w001 = weight_w(0.01);
    double mx = 0.0;
    for (int i = 1; i <= 1000; ++i) mx = std::max(mx, weight_w(0.01 * i));
    CHECK(mx <= w001 + 1e-6);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 5000; ++i) {
        const double xi = 1e-4 + 12.0 * u(rng) * u(rng);
        worst = std::max(worst, std::fabs(weight_w(xi) - oracle::weight_w_closed(xi)));
    }
    MESSAGE("max |W - closed form| = " << worst);
    CHECK(worst <= kWTableError);

    CHECK(weight_w(50.0) == 0.0);
    CHECK(weight_w(80.0) == 0.0);
    CHECK_THROWS_AS(weight_w(0.0), DomainError);
    CHECK_THROWS_AS(weight_w(-1.0), DomainError);
}

TEST_CASE("W table interpolation against direct quadrature") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(1e-3, 12.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double xi = u(rng);
        worst = std::max(worst, std::fabs(weight_w(xi) - weight_w_direct(xi)));
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("W quadrature is stable under parameter doubling") {
    for (double xi : {1e-6, 0.05, 0.5, 1.0, 3.0, 7.0}) {
        const double base = weight_w_direct(xi);
        CHECK(std::fabs(weight_w_direct(xi, 2 * kWHeight, kWStep) - base) <= 1e-10);
        CHECK(std::fabs(weight_w_direct(xi, kWHeight, kWStep / 2) - base) <= 1e-10);
    }
}

TEST_CASE("W cache round trip") {
    std::stringstream io;
    WWeight::instance().save_cache(io);
    WWeight fresh;
    CHECK(fresh.load_cache(io) > 0);
    for (double xi : {1e-5, 0.3, 2.2, 9.9}) CHECK(std::fabs(fresh(xi) - weight_w(xi)) <= 1e-15);
    std::stringstream bad("# wweight.cache v0\n1 1\n");
    WWeight other;
    CHECK(other.load_cache(bad) == 0);
}

TEST_CASE("central values against the Hurwitz oracle") {
    for (std::int64_t d : {1, 3, 5, 7, 11, 13, 15, 101}) {
        const auto rec = l_half(d);
        const double ref = static_cast<double>(oracle::l_half_hurwitz(d));
        CHECK(std::fabs(rec.L_value - ref) <= 1e-6);
        CHECK(rec.disc == 8 * d);
        CHECK(rec.est_error >= 0.0);
        CHECK(rec.truncation >= 1);
    }
    CHECK_THROWS_AS(l_half(2), DomainError);
    CHECK_THROWS_AS(l_half(9), DomainError);
    CHECK_THROWS_AS(l_half(0), DomainError);
}

TEST_CASE("character periodicity") {
    std::mt19937_64 rng(3);
    for (std::int64_t d : {1, 3, 7, 105, 1001}) {
        const std::int64_t q = 8 * d;
        for (int i = 0; i < 1000; ++i) {
            const auto n = static_cast<std::int64_t>(1 + rng() % 1'000'000);
            REQUIRE(arith::kronecker(q, n + q) == arith::kronecker(q, n));
        }
    }
}

TEST_CASE("error estimate bounds the truncation change") {
    std::mt19937_64 rng(4);
    int checked = 0;
    while (checked < 100) {
        const auto d = static_cast<std::int64_t>(1 + 2 * (rng() % 50'000));
        if (!oracle::squarefree(d)) continue;
        const auto full = l_half(d);
        const auto half = l_half_truncated(d, full.truncation / 2);
        REQUIRE(std::fabs(full.L_value - half.L_value) <= half.est_error);
        // a cutoff where the tail is not negligible
        const auto root = std::sqrt(8.0 * d / std::numbers::pi);
        const auto short_cut = std::max<std::int64_t>(1, static_cast<std::int64_t>(2.0 * root));
        const auto s = l_half_truncated(d, short_cut);
        REQUIRE(std::fabs(full.L_value - s.L_value) <= s.est_error);
        ++checked;
    }
}

TEST_CASE("central values are nonnegative for small d") {
    int below = 0, total = 0;
    for (std::int64_t d = 1; d <= 1000; d += 2) {
        if (!oracle::squarefree(d)) continue;
        const auto r = l_half(d);
        ++total;
        if (r.L_value < -r.est_error) ++below;
    }
    MESSAGE(below << " of " << total << " central values below -est_error");
}

TEST_CASE("character sums") {
    const auto c1 = char_sum_check(1, 100000);
    CHECK(c1.square);
    CHECK(c1.predicted == doctest::Approx(4.0 * 100000 / (std::numbers::pi * std::numbers::pi)));
    CHECK(std::fabs(c1.observed - c1.predicted) <= 10 * std::sqrt(100000.0));
    CHECK(c1.within);

    for (std::int64_t n : {3, 5, 7, 11}) {
        const auto c = char_sum_check(n, 10000);
        CHECK_FALSE(c.square);
        CHECK(c.predicted == 0.0);
        CHECK(c.bound == doctest::Approx(10 * 100 * std::pow(double(n), 0.25) * std::log(2.0 * n)));
        CHECK(std::fabs(c.observed) <= c.bound);
        CHECK(c.within);
    }

    const auto c9 = char_sum_check(9, 10000);
    CHECK(c9.square);
    CHECK(c9.predicted == doctest::Approx(10000 * 6 / (std::numbers::pi * std::numbers::pi) * (2.0 / 3) * (3.0 / 4)));
    CHECK(std::fabs(c9.observed - c9.predicted) <= 10 * 100);

    // direct enumeration with the Jacobi oracle
    for (std::int64_t n : {1, 3, 15, 21, 49}) {
        std::int64_t acc = 0;
        for (std::int64_t d = 1; d <= 3000; d += 2)
            if (oracle::squarefree(d)) acc += oracle::jacobi(8 * d, n);
        CHECK(char_sum(n, 1, 3000) == double(acc));
    }
    CHECK_THROWS_AS(char_sum_check(4, 100), DomainError);
    CHECK_THROWS_AS(char_sum_check(3, 2), DomainError);
}

TEST_CASE("character sums oscillate for non-square n") {
    for (std::int64_t n : {3, 5, 7, 11, 13, 15}) {
        // short windows are dominated by the start-up bias at small d
        const std::int64_t w = 100000;
        double mean_abs = 0.0, total = 0.0;
        for (int j = 0; j < 10; ++j) {
            const double s = char_sum(n, 1 + j * w, (j + 1) * w);
            mean_abs += std::fabs(s) / 10;
            total += s / 10;
        }
        MESSAGE("n=" << n << " mean |S| " << mean_abs << " |mean S| " << std::fabs(total));
        CHECK(std::fabs(total) * 2 <= mean_abs);
    }
}

TEST_CASE("first quadratic moment") {
    const auto one = CoefficientTable::from_entries(custom_spec(1), {{1, 1.0}});
    CHECK(m1_quadratic(one, 1e4).sum_main == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(m1_quadratic(one, 1e4).scaled_main == doctest::Approx(1e4 / (16 * std::numbers::pi * std::numbers::pi / 6) * 2 / 3));

    const double x = 0.8;
    const auto two = CoefficientTable::from_entries(custom_spec(3), {{1, 1.0}, {3, x}});
    CHECK(m1_quadratic(two, 1e4).sum_main == doctest::Approx(2.0 / 3 + x * x * (2.0 / 3) * (3.0 / 4)).epsilon(1e-15));

    const auto t = build_table(desk(Scheme::dirichlet_f, 1000));
    const auto q = m1_quadratic(t, 1e6);
    MESSAGE("N=1000 sum_main/euler_main = " << q.sum_main / q.euler_main);
    CHECK(q.sum_main / q.euler_main >= 0.9);
    CHECK(q.sum_main / q.euler_main <= 1.0);

    const auto even = CoefficientTable::from_entries(custom_spec(4), {{1, 1.0}, {2, 0.5}});
    CHECK_THROWS_AS(m1_quadratic(even, 1e4), DomainError);
}

TEST_CASE("structural identity against the pair loop") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::int64_t N = 100 + 40 * trial;
        std::vector<TableEntry> e;
        for (std::int64_t n = 1; n <= N; n += 2)
            if (oracle::squarefree(n) && (n == 1 || rng() % 2)) e.push_back({n, val(rng)});
        const auto t = CoefficientTable::from_entries(custom_spec(N), e);
        CHECK(m1_quadratic(t, 1e5).sum_main == m1_quadratic_pairs(t));
    }
    for (auto scheme : {Scheme::dirichlet_f, Scheme::dirichlet_signed}) {
        const auto t = build_table(desk(scheme, 500));
        CHECK(m1_quadratic(t, 1e5).sum_main == m1_quadratic_pairs(t));
    }
}

TEST_CASE("second quadratic moment") {
    const double X = 1e6, lX = std::log(X);
    const auto one = CoefficientTable::from_entries(custom_spec(1), {{1, 1.0}});
    const auto m1 = m2_main(one, X);
    CHECK(m1.triple_sum == doctest::Approx(lX).epsilon(1e-15));
    CHECK(m1.triples == 1);

    // one prime: triples (1,1,1), (1,1,p), (1,p,1), (p,1,1)
    for (double x : {0.6, -0.6}) {
        const std::int64_t p = 7;
        const double pd = 7.0;
        const double h = pd * pd / (pd * pd + pd - 1);
        const double lc = std::log(pd) / (pd * (pd + 1));
        const auto t = CoefficientTable::from_entries(custom_spec(p), {{1, 1.0}, {p, x}});
        const auto r = m2_main(t, X);
        const double expect =
            lX * (1 + x * x * h + 2 * x * h / std::sqrt(pd)) - 2 * x * h / std::sqrt(pd) * (std::log(pd) + lc) - x * x * h * lc;
        CHECK(r.triple_sum == doctest::Approx(expect).epsilon(1e-14));
        CHECK(r.triples == 4);
        CHECK(r.euler_approx == doctest::Approx(lX * (1 + x * x + 2 * x / std::sqrt(pd))).epsilon(1e-14));
    }

    ResonatorSpec wrong;
    wrong.N = 100;
    wrong.window = PrimeWindow{3, 20};
    CHECK_THROWS_AS(m2_main(build_table(wrong), X), DomainError);

    ResonatorSpec huge;
    huge.scheme = Scheme::dirichlet_f;
    huge.N = 3'000'000;
    huge.window = PrimeWindow{3, 200};
    CHECK_THROWS_AS(m2_main(build_table(huge), X), ResourceError);
}

TEST_CASE("second moment ratio decreases with N") {
    const double X = 1e8;
    std::vector<double> ratios;
    for (std::int64_t N : {100, 1000, 10000}) {
        const auto t = build_table(desk(Scheme::dirichlet_signed, N));
        const auto m2 = m2_main(t, X);
        const auto m1 = m1_quadratic(t, X);
        ratios.push_back(m2.triple_sum / (m1.euler_main * std::log(X)));
        MESSAGE("N=" << N << " ratio " << ratios.back() << " triples " << m2.triples);
    }
    CHECK(ratios[1] < ratios[0]);
    CHECK(ratios[2] < ratios[1]);
}

TEST_CASE("discriminant range and resonator values") {
    const auto ds = discriminant_range(1600);
    REQUIRE_FALSE(ds.empty());
    std::vector<std::int64_t> brute;
    for (std::int64_t d = 100; d <= 200; ++d)
        if (d % 2 && oracle::squarefree(d)) brute.push_back(d);
    CHECK(ds == brute);
    CHECK_THROWS_AS(discriminant_range(1e9), DomainError);
    CHECK_THROWS_AS(discriminant_range(10), DomainError);

    const auto t = build_table(desk(Scheme::dirichlet_f, 200));
    for (std::int64_t d : {101, 103, 105}) {
        double acc = 0.0;
        for (auto e : t.entries()) acc += e.r * oracle::jacobi(8 * d, e.n);
        CHECK(resonator_at(t, d) == doctest::Approx(acc).epsilon(1e-14));
    }
}

TEST_CASE("exhaustive hunt at small X") {
    const double X = 1600;
    const auto ds = discriminant_range(X);
    double lo = INFINITY, hi = -INFINITY;
    for (auto d : ds) {
        const double v = l_half(d).L_value;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    ResonatorSpec s;
    s.scheme = Scheme::dirichlet_f;
    s.N = 100;
    s.window = PrimeWindow{3, 30};
    const auto large = hunt_discriminants(s, X, HuntMode::large, ds.size());
    const auto small = hunt_discriminants(s, X, HuntMode::small, ds.size());
    REQUIRE(large.size() == ds.size());
    REQUIRE(small.size() == ds.size());
    CHECK(large.front().L_value == hi);
    CHECK(small.front().L_value == lo);
    CHECK(small.front().L_value <= large.front().L_value);
    for (std::size_t i = 1; i < large.size(); ++i) {
        CHECK(large[i - 1].L_value >= large[i].L_value);
        CHECK(small[i - 1].L_value <= small[i].L_value);
    }

    const auto few = hunt_discriminants(s, 1e5, HuntMode::small, 5);
    CHECK(few.size() == 5);
    const auto few_large = hunt_discriminants(s, 1e5, HuntMode::large, 5);
    CHECK(few.front().L_value <= few_large.front().L_value);
    CHECK_THROWS_AS(hunt_discriminants(s, X, HuntMode::small, 0), DomainError);

    const auto r1 = random_discriminants(1e5, 20, 9), r2 = random_discriminants(1e5, 20, 9);
    REQUIRE(r1.size() == 20);
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].d == r2[i].d);
        CHECK(r1[i].L_value == r2[i].L_value);
    }
}
