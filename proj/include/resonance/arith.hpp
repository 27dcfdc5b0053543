#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace resonance::arith {

/// Primes up to `limit`, ascending.
struct PrimeTable {
    std::int64_t limit = 0;
    std::vector<std::int64_t> primes;
};

/// n = prod p^a with primes strictly increasing.
struct Factorization {
    std::int64_t n = 1;
    std::vector<std::pair<std::int64_t, int>> factors;
};

struct MobiusValue {
    int mu = 1;
    bool squarefree = true;
};

/// Largest sieve limit accepted by sieve_primes and SmallestFactorSieve.
/// Default 2^32; lower it to cap memory.
std::int64_t sieve_budget();
void set_sieve_budget(std::int64_t limit);

PrimeTable sieve_primes(std::int64_t limit);

/// Kronecker symbol (a/n) for n >= 1. (a/2) follows a mod 8.
int kronecker(std::int64_t a, std::int64_t n);

MobiusValue mu_and_squarefree(std::int64_t n);

/// sigma(gcd(m, n)).
std::int64_t sigma_gcd(std::int64_t m, std::int64_t n);

std::vector<std::int64_t> divisors(std::int64_t n);

Factorization factorize(std::int64_t n);

std::int64_t gcd(std::int64_t a, std::int64_t b);

/// Overflow-checked product; throws DomainError past 2^63-1.
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

/// Inverse of a modulo m (gcd(a, m) must be 1).
std::int64_t mod_inverse(std::int64_t a, std::int64_t m);

/// Smallest-prime-factor table on [0, limit]; factorizes any n <= limit in
/// O(log n).
class SmallestFactorSieve {
public:
    explicit SmallestFactorSieve(std::int64_t limit);

    std::int64_t limit() const { return limit_; }
    std::int64_t smallest_factor(std::int64_t n) const { return spf_[static_cast<std::size_t>(n)]; }
    Factorization factorize(std::int64_t n) const;

private:
    std::int64_t limit_;
    std::vector<std::uint32_t> spf_;
};

/// flags[i] != 0 iff lo + i is squarefree, for lo >= 1. Segmented by the
/// squares of primes up to sqrt(hi).
std::vector<std::uint8_t> squarefree_flags(std::int64_t lo, std::int64_t hi);

} // namespace resonance::arith
