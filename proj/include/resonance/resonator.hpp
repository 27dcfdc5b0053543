#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace resonance {

enum class Scheme {
    theorem21,        // r(p) = L / (sqrt(p) log p)
    frequency_a,      // r(p) = A / sqrt(p)
    signed_theorem21, // mu(n) times the theorem21 coefficients
    dirichlet_f,      // theorem21 coefficients on odd primes only
    dirichlet_signed, // mu(n) times dirichlet_f
    custom,           // explicit entries, no generating formula
};

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view name);
bool is_signed(Scheme s);

struct PrimeWindow {
    double lo = 0.0;
    double hi = 0.0;
};

/// Default L = sqrt(log N log log N); 1 for N < 3 where the formula breaks down.
double default_L(std::int64_t N);

/// Declarative description of a coefficient scheme.
struct ResonatorSpec {
    Scheme scheme = Scheme::theorem21;
    std::int64_t N = 2;
    std::optional<double> L;
    std::optional<double> A;
    std::optional<PrimeWindow> window; // override; default window otherwise

    double resolved_L() const;
    /// The scheme's own window, which may be empty or inverted at desk scale.
    PrimeWindow default_window() const;
    PrimeWindow resolved_window() const;
    /// frequencyA admissibility 10 A^2 log A <= log N; always true otherwise.
    bool admissible() const;
    /// Throws DomainError if the fields violate the type invariants.
    void validate() const;
    /// Same spec with scheme swapped for its signed/unsigned partner.
    ResonatorSpec with_sign(bool signed_variant) const;
    std::string summary() const;
};

/// Desk-scale override window [c1 L^2, c1 c2 L^2]; the asymptotic default
/// window is empty for every N a workstation can reach.
PrimeWindow desk_window(std::int64_t N, double c1 = 1.0, double c2 = 4.0);

struct TableEntry {
    std::int64_t n;
    double r;
};

struct PrimeValue {
    std::int64_t p;
    double r;
};

/// Immutable sparse map n -> r(n), ascending in n.
class CoefficientTable {
public:
    /// Enumerates the scheme's support: squarefree products of window primes
    /// up to N, by depth-first search. Aborts past 2^22 entries.
    static CoefficientTable build(const ResonatorSpec& spec);

    /// Arbitrary coefficients (e.g. an eigenvector). Keys must be positive
    /// and strictly increasing. For non-custom schemes the window prime
    /// values are regenerated from the spec.
    static CoefficientTable from_entries(ResonatorSpec spec, std::vector<TableEntry> entries);

    const ResonatorSpec& spec() const { return spec_; }
    std::span<const TableEntry> entries() const { return entries_; }
    std::span<const PrimeValue> prime_values() const { return primes_; }
    std::size_t size() const { return entries_.size(); }
    std::int64_t support_bound() const { return spec_.N; }

    std::optional<double> find(std::int64_t n) const;
    std::optional<std::size_t> index_of(std::int64_t n) const;

    /// Prime factorization of entry i as (prime, exponent) pairs.
    std::span<const std::pair<std::int64_t, int>> factors(std::size_t i) const;

private:
    ResonatorSpec spec_;
    std::vector<TableEntry> entries_;
    std::vector<PrimeValue> primes_;
    std::vector<std::pair<std::int64_t, int>> factor_data_;
    std::vector<std::size_t> factor_offsets_;
};

inline constexpr std::size_t kMaxSupport = std::size_t{1} << 22;

inline CoefficientTable build_table(const ResonatorSpec& spec) { return CoefficientTable::build(spec); }

/// sum over m k <= N of r(m) r(mk) / sqrt(k).
double numerator_exact(const CoefficientTable& table);

/// sum of r(n)^2.
double denominator_exact(const CoefficientTable& table);

enum class EulerForm {
    plain,  // 1 + f^2
    plus,   // 1 + f^2 + f/sqrt(p)
    minus2, // 1 + f^2 - 2 f/sqrt(p)
    fourth, // 1 + 4 f^2 + f^4
    cusp,   // 1 + f^2 (1 + 1/p) + 2 f/sqrt(p)
};

/// Product over window primes with f(p) = |r(p)|, accumulated in logs.
/// Throws DomainError naming the prime if a factor is not positive.
double euler_product(const CoefficientTable& table, EulerForm form);

/// N^-alpha prod(1 + p^a f^2 + f p^(a-1/2)) / prod(1 + f^2 + f/sqrt(p)).
double rankin_tail_ratio(const CoefficientTable& table, double alpha);

struct AmGmCertificate {
    double bound = 0.0;
    double numerator = 0.0;
    bool holds = false;
};

/// Upper bound for |numerator| from 2|ab| <= a^2/g + g b^2 with the dual
/// weight g(p^k) = min(1, L / (p^(k/2) log p)). `L` defaults to the spec's.
AmGmCertificate amgm_upper_certificate(const CoefficientTable& table, std::optional<double> L = {});

/// Upper limit on N for the g-prefix sieve inside amgm_upper_certificate.
inline constexpr std::int64_t kAmGmSieveCap = 50'000'000;

void write_table(std::ostream& out, const CoefficientTable& table);
CoefficientTable read_table(std::istream& in);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

} // namespace resonance
