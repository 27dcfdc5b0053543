#include "doctest.h"
#include "oracles.hpp"

#include "resonance/arith.hpp"
#include "resonance/error.hpp"

#include <limits>
#include <random>

using namespace resonance;
using namespace resonance::arith;

TEST_CASE("sieve examples") {
    CHECK(sieve_primes(10).primes == std::vector<std::int64_t>{2, 3, 5, 7});
    CHECK(sieve_primes(2).primes == std::vector<std::int64_t>{2});

    // trial-division count of primes below 10^6
    std::int64_t count = 0;
    for (std::int64_t n = 2; n <= 1'000'000; ++n)
        if (oracle::is_prime(n)) ++count;
    const auto table = sieve_primes(1'000'000);
    CHECK(table.primes.size() == static_cast<std::size_t>(count));
    CHECK(count == 78498);
    CHECK(table.limit == 1'000'000);
}

TEST_CASE("sieve budget") {
    const auto saved = sieve_budget();
    set_sieve_budget(1000);
    CHECK_THROWS_AS(sieve_primes(5000), ResourceError);
    CHECK_THROWS_AS(SmallestFactorSieve(5000), ResourceError);
    set_sieve_budget(saved);
    CHECK(sieve_primes(5000).primes.size() == 669);
}

TEST_CASE("kronecker examples") {
    CHECK(kronecker(1, 7) == 1);
    CHECK(kronecker(5, 5) == 0);
    CHECK(kronecker(8, 3) == -1);
    // (a/2) by a mod 8
    CHECK(kronecker(4, 2) == 0);
    CHECK(kronecker(1, 2) == 1);
    CHECK(kronecker(7, 2) == 1);
    CHECK(kronecker(3, 2) == -1);
    CHECK(kronecker(5, 2) == -1);
    CHECK(kronecker(-1, 2) == 1);
}

TEST_CASE("kronecker is multiplicative in the top argument for odd n") {
    for (std::int64_t n = 1; n <= 10'000; n += 2) {
        // a, b over a full period plus sign changes
        for (std::int64_t a = -3; a <= 6; ++a)
            for (std::int64_t b = -2; b <= 5; ++b)
                if (kronecker(a, n) * kronecker(b, n) != kronecker(a * b, n)) {
                    FAIL("n=" << n << " a=" << a << " b=" << b);
                }
    }
}

TEST_CASE("kronecker agrees with the Jacobi oracle") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> da(-1'000'000'000, 1'000'000'000);
    std::uniform_int_distribution<std::int64_t> dn(1, 500'000);
    int checked = 0;
    while (checked < 100'000) {
        const std::int64_t n = 2 * dn(rng) - 1;
        if (!oracle::squarefree(n)) continue;
        const std::int64_t a = da(rng);
        REQUIRE(kronecker(a, n) == oracle::jacobi(a, n));
        ++checked;
    }
}

TEST_CASE("kronecker vanishes exactly on shared factors") {
    for (std::int64_t n = 1; n <= 300; ++n)
        for (std::int64_t a = -50; a <= 50; ++a)
            CHECK((kronecker(a, n) == 0) == (oracle::gcd(a, n) > 1));
}

TEST_CASE("mobius examples and properties") {
    auto v1 = mu_and_squarefree(1);
    CHECK(v1.mu == 1);
    CHECK(v1.squarefree);
    auto v30 = mu_and_squarefree(30);
    CHECK(v30.mu == -1);
    CHECK(v30.squarefree);
    auto v12 = mu_and_squarefree(12);
    CHECK(v12.mu == 0);
    CHECK_FALSE(v12.squarefree);

    for (std::int64_t n = 1; n <= 10'000; ++n) {
        int s = 0;
        for (auto d : divisors(n)) s += mu_and_squarefree(d).mu;
        REQUIRE(s == (n == 1 ? 1 : 0));
        const auto v = mu_and_squarefree(n);
        REQUIRE(v.squarefree == oracle::squarefree(n));
        REQUIRE((v.mu != 0) == v.squarefree);
    }
    for (std::int64_t m = 1; m <= 120; ++m)
        for (std::int64_t n = 1; n <= 120; ++n)
            if (oracle::gcd(m, n) == 1) REQUIRE(mu_and_squarefree(m * n).mu == mu_and_squarefree(m).mu * mu_and_squarefree(n).mu);
}

TEST_CASE("sigma_gcd examples") {
    CHECK(sigma_gcd(4, 6) == 3);
    CHECK(sigma_gcd(5, 7) == 1);
    // sigma(12) by enumeration
    std::int64_t s = 0;
    for (std::int64_t d = 1; d <= 12; ++d)
        if (12 % d == 0) s += d;
    CHECK(sigma_gcd(36, 48) == s);
    CHECK(s == 28);
}

TEST_CASE("divisors") {
    CHECK(divisors(1) == std::vector<std::int64_t>{1});
    CHECK(divisors(12) == std::vector<std::int64_t>{1, 2, 3, 4, 6, 12});
    CHECK(divisors(97) == std::vector<std::int64_t>{1, 97});
    for (std::int64_t n = 1; n <= 5000; ++n) {
        const auto d = divisors(n);
        std::vector<std::int64_t> brute;
        for (std::int64_t k = 1; k <= n; ++k)
            if (n % k == 0) brute.push_back(k);
        REQUIRE(d == brute);
        for (std::size_t i = 0; i < d.size(); ++i) REQUIRE(d[i] * d[d.size() - 1 - i] == n);
    }
}

TEST_CASE("factorization") {
    for (std::int64_t n = 1; n <= 20'000; ++n) {
        const auto f = factorize(n);
        std::int64_t prod = 1, last = 1;
        for (auto [p, a] : f.factors) {
            REQUIRE(oracle::is_prime(p));
            REQUIRE(p > last);
            REQUIRE(a >= 1);
            last = p;
            for (int i = 0; i < a; ++i) prod *= p;
        }
        REQUIRE(prod == n);
        REQUIRE(f.n == n);
    }
    const SmallestFactorSieve spf(100'000);
    std::mt19937_64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        const std::int64_t n = 1 + static_cast<std::int64_t>(rng() % 100'000);
        const auto a = spf.factorize(n), b = factorize(n);
        REQUIRE(a.factors == b.factors);
    }
    const auto big = factorize(999'999'999'989LL * 3);
    REQUIRE(big.factors.size() == 2);
    CHECK(big.factors[1].first == 999'999'999'989LL);
}

TEST_CASE("squarefree flags") {
    const std::int64_t lo = 999'000, hi = 1'001'000;
    const auto flags = squarefree_flags(lo, hi);
    REQUIRE(flags.size() == static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t n = lo; n <= hi; ++n) REQUIRE((flags[n - lo] != 0) == oracle::squarefree(n));
    const auto small = squarefree_flags(1, 100);
    int count = 0;
    for (auto f : small) count += f != 0;
    CHECK(count == 61);
}

TEST_CASE("overflow checks and inverses") {
    CHECK(checked_mul(3'000'000'000LL, 3'000'000'000LL) == 9'000'000'000'000'000'000LL);
    CHECK_THROWS_AS(checked_mul(4'000'000'000LL, 4'000'000'000LL), DomainError);
    CHECK_THROWS_AS(checked_mul(std::numeric_limits<std::int64_t>::max(), 2), DomainError);
    CHECK(gcd(84, 36) == 12);
    CHECK(gcd(0, 5) == 5);
    for (std::int64_t m = 2; m <= 200; ++m)
        for (std::int64_t a = 1; a < m; ++a)
            if (oracle::gcd(a, m) == 1) REQUIRE((a * mod_inverse(a, m)) % m == 1);
}
