#pragma once

#include "resonance/resonator.hpp"

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <vector>

namespace resonance {

/// W(xi) = 1/(2 pi i) int_(1) Gamma(s/2 + 1/4)/Gamma(1/4) xi^-s ds/s.
inline constexpr double kWCutoff = 50.0;
inline constexpr double kWHeight = 60.0;
inline constexpr double kWStep = 0.01;
/// Bound on the interpolation error of the tabulated W.
inline constexpr double kWTableError = 1e-9;

/// Direct trapezoid quadrature on Re s = 1, |Im s| <= height.
double weight_w_direct(double xi, double height = kWHeight, double step = kWStep);

/// Tabulated W on a grid uniform in sqrt(xi), with 4-point interpolation.
/// The table is filled once on first use. W = 0 from xi = 50 on.
class WWeight {
public:
    static constexpr double kGridStep = 0.005; // in u = sqrt(xi)

    static WWeight& instance();

    double operator()(double xi);

    void save_cache(std::ostream& out);
    /// Replaces the table when the file matches the grid; returns nodes read.
    std::size_t load_cache(std::istream& in);

    WWeight();
    ~WWeight();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Throws DomainError for xi <= 0.
double weight_w(double xi);

struct DiscriminantRecord {
    std::int64_t d = 0;
    std::int64_t disc = 0;
    double L_value = 0.0;
    double resonator_value = 0.0;
    std::int64_t truncation = 0;
    double est_error = 0.0;
};

/// L(1/2, chi_8d) by the smoothed approximate functional equation, cut off
/// where n sqrt(pi) / sqrt(8d) reaches 45.
DiscriminantRecord l_half(std::int64_t d);

/// Same sum cut at an explicit n_max, for convergence checks.
DiscriminantRecord l_half_truncated(std::int64_t d, std::int64_t n_max);

struct CharSumCheck {
    std::int64_t n = 0;
    std::int64_t z = 0;
    double observed = 0.0;
    double predicted = 0.0;
    double bound = 0.0;
    bool square = false;
    bool within = false;
};

/// sum over odd squarefree d <= z of (8d / n), next to its predicted main
/// term and the error envelope with constant 10.
CharSumCheck char_sum_check(std::int64_t n, std::int64_t z);

/// Same sum over lo <= d <= hi.
double char_sum(std::int64_t n, std::int64_t lo, std::int64_t hi);

struct QuadraticFirstMoment {
    double sum_main = 0.0;   // sum r(n)^2 prod_{p | 2n} p/(p+1)
    double euler_main = 0.0; // (2/3) prod (1 + f(p)^2 p/(p+1))
    double scaled_main = 0.0; // X / (16 zeta(2)) sum_main
};

QuadraticFirstMoment m1_quadratic(const CoefficientTable& table, double X);

/// The same diagonal sum by the naive pair loop over n1 n2 = odd square.
double m1_quadratic_pairs(const CoefficientTable& table);

struct QuadraticSecondMoment {
    double triple_sum = 0.0; // with the constant C set to 0
    double euler_approx = 0.0; // log X prod (1 + f^2 -+ 2 f / sqrt(p))
    std::size_t triples = 0;
};

inline constexpr std::size_t kMaxTriples = 1'000'000;

QuadraticSecondMoment m2_main(const CoefficientTable& table, double X);

enum class HuntMode { large, small };

/// Odd squarefree d in [X/16, X/8].
std::vector<std::int64_t> discriminant_range(double X);

/// R(8d) = sum r(n) (8d / n).
double resonator_at(const CoefficientTable& table, std::int64_t d);

/// Ranks the d-range by R(8d)^2 (signed scheme for small values, unsigned for
/// large) and evaluates L(1/2) for the best `budget` candidates.
std::vector<DiscriminantRecord> hunt_discriminants(const ResonatorSpec& spec, double X, HuntMode mode,
                                                   std::size_t budget);

/// L-values at `count` d drawn uniformly from the d-range.
std::vector<DiscriminantRecord> random_discriminants(double X, std::size_t count, std::uint64_t seed);

} // namespace resonance
