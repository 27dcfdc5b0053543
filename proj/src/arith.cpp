#include "resonance/arith.hpp"

#include "resonance/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

namespace resonance::arith {

namespace {

std::int64_t g_sieve_budget = std::int64_t{1} << 32;

std::int64_t isqrt(std::int64_t n) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

void check_budget(std::int64_t limit) {
    if (limit > g_sieve_budget)
        throw ResourceError("sieve limit " + std::to_string(limit) + " exceeds budget " +
                            std::to_string(g_sieve_budget));
}

} // namespace

std::int64_t sieve_budget() { return g_sieve_budget; }
void set_sieve_budget(std::int64_t limit) { g_sieve_budget = limit; }

PrimeTable sieve_primes(std::int64_t limit) {
    if (limit < 2) throw DomainError("sieve_primes: limit must be >= 2");
    check_budget(limit);

    // odd-only: index i stands for 2i+1
    const auto half = static_cast<std::size_t>((limit - 1) / 2 + 1);
    std::vector<bool> composite(half, false);
    for (std::int64_t p = 3; p * p <= limit; p += 2) {
        if (composite[static_cast<std::size_t>(p / 2)]) continue;
        for (std::int64_t q = p * p; q <= limit; q += 2 * p)
            composite[static_cast<std::size_t>(q / 2)] = true;
    }

    PrimeTable table;
    table.limit = limit;
    table.primes.push_back(2);
    for (std::size_t i = 1; i < half; ++i)
        if (!composite[i]) table.primes.push_back(static_cast<std::int64_t>(2 * i + 1));
    return table;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b != 0) {
        const std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out))
        throw DomainError("integer overflow: " + std::to_string(a) + " * " + std::to_string(b));
    return out;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    if (m == 1) return 0;
    std::int64_t old_r = ((a % m) + m) % m, r = m;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    }
    if (old_r != 1) throw DomainError("mod_inverse: argument not invertible");
    return ((old_s % m) + m) % m;
}

int kronecker(std::int64_t a, std::int64_t n) {
    if (n < 1) throw DomainError("kronecker: modulus must be >= 1");
    int result = 1;

    // factor out powers of two in n using (a/2)
    while ((n & 1) == 0) {
        n >>= 1;
        const std::int64_t r = ((a % 8) + 8) % 8;
        if (r % 2 == 0) return 0;
        if (r == 3 || r == 5) result = -result;
    }
    if (n == 1) return result;

    // Jacobi symbol for odd n
    std::int64_t x = ((a % n) + n) % n;
    while (x != 0) {
        while ((x & 1) == 0) {
            x >>= 1;
            const std::int64_t r = n % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(x, n);
        if (x % 4 == 3 && n % 4 == 3) result = -result;
        x %= n;
    }
    return n == 1 ? result : 0;
}

Factorization factorize(std::int64_t n) {
    if (n < 1) throw DomainError("factorize: n must be >= 1");
    Factorization f;
    f.n = n;
    std::int64_t m = n;
    for (std::int64_t p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
        if (m % p != 0) continue;
        int a = 0;
        while (m % p == 0) {
            m /= p;
            ++a;
        }
        f.factors.emplace_back(p, a);
    }
    if (m > 1) f.factors.emplace_back(m, 1);
    return f;
}

MobiusValue mu_and_squarefree(std::int64_t n) {
    const auto f = factorize(n);
    MobiusValue v;
    for (const auto& [p, a] : f.factors) {
        if (a > 1) return {0, false};
        v.mu = -v.mu;
    }
    return v;
}

std::int64_t sigma_gcd(std::int64_t m, std::int64_t n) {
    if (m < 1 || n < 1) throw DomainError("sigma_gcd: arguments must be >= 1");
    const auto f = factorize(gcd(m, n));
    std::int64_t sigma = 1;
    for (const auto& [p, a] : f.factors) {
        std::int64_t term = 1, pk = 1;
        for (int i = 0; i < a; ++i) {
            pk = checked_mul(pk, p);
            term += pk;
        }
        sigma = checked_mul(sigma, term);
    }
    return sigma;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
    const auto f = factorize(n);
    std::vector<std::int64_t> out{1};
    for (const auto& [p, a] : f.factors) {
        const std::size_t base = out.size();
        std::int64_t pk = 1;
        for (int i = 0; i < a; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SmallestFactorSieve::SmallestFactorSieve(std::int64_t limit) : limit_(limit) {
    if (limit < 1) throw DomainError("SmallestFactorSieve: limit must be >= 1");
    check_budget(limit);
    spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
    for (std::int64_t i = 2; i <= limit; ++i) {
        if (spf_[static_cast<std::size_t>(i)] != 0) continue;
        spf_[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i);
        if (i > limit / i) continue;
        for (std::int64_t j = i * i; j <= limit; j += i)
            if (spf_[static_cast<std::size_t>(j)] == 0) spf_[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(i);
    }
}

Factorization SmallestFactorSieve::factorize(std::int64_t n) const {
    if (n < 1 || n > limit_) throw DomainError("SmallestFactorSieve::factorize: n out of range");
    Factorization f;
    f.n = n;
    while (n > 1) {
        const std::int64_t p = spf_[static_cast<std::size_t>(n)];
        int a = 0;
        while (n % p == 0) {
            n /= p;
            ++a;
        }
        f.factors.emplace_back(p, a);
    }
    return f;
}

std::vector<std::uint8_t> squarefree_flags(std::int64_t lo, std::int64_t hi) {
    if (lo < 1 || hi < lo) throw DomainError("squarefree_flags: need 1 <= lo <= hi");
    check_budget(hi - lo + 1);
    std::vector<std::uint8_t> flags(static_cast<std::size_t>(hi - lo + 1), 1);
    const std::int64_t root = isqrt(hi);
    if (root < 2) return flags;
    for (const std::int64_t p : sieve_primes(root).primes) {
        const std::int64_t sq = p * p;
        for (std::int64_t q = ((lo + sq - 1) / sq) * sq; q <= hi; q += sq)
            flags[static_cast<std::size_t>(q - lo)] = 0;
    }
    return flags;
}

} // namespace resonance::arith
