#pragma once

#include "resonance/resonator.hpp"

#include <cstdint>
#include <vector>

namespace resonance {

/// S(m, n; c) by enumeration over invertible residues. c <= 10^6.
double kloosterman(std::int64_t m, std::int64_t n, std::int64_t c);

struct BesselValue {
    double value = 0.0;
    double paper_bound = 0.0; // e^{x/2} (x/2)^order / order!
};

/// J_order(x) by the ascending series, for 0 <= x <= 2 (order + 1).
BesselValue bessel_j(int order, double x);

struct PeterssonParams {
    int k = 12;
    std::int64_t m = 1;
    std::int64_t n = 1;
    /// 0 picks the smallest c_max whose tail bound is <= 1e-12 (at most 10^4).
    std::int64_t c_max = 0;

    void validate() const;
    /// 4 pi sqrt(mn) <= k / 10
    bool in_regime() const;
};

struct PeterssonResult {
    double value = 0.0;
    int delta = 0;
    std::int64_t c_max = 0;
    double tail_bound = 0.0;
    bool in_regime = false;
};

inline constexpr double kPeterssonTailTarget = 1e-12;
inline constexpr std::int64_t kPeterssonMaxC = 10'000;

/// Bound for the Kloosterman terms with c > c_max, from |S| <= c and the
/// series bound for J.
double petersson_tail_bound(int k, std::int64_t m, std::int64_t n, std::int64_t c_max);

/// delta_{m,n} + 2 pi i^k sum_{c <= c_max} S(m, n; c)/c J_{k-1}(4 pi sqrt(mn)/c).
PeterssonResult petersson_rhs(const PeterssonParams& params);

inline constexpr int kMaxWeightV = 400;

/// V(x) = 1/(2 pi i) int (2 pi x)^-s Gamma(s + k/2)/Gamma(k/2) x^-s ds/s.
double weight_v(double x, int k);

/// The contour is placed near the saddle of the integrand (Re s = 2 unless
/// that is far from it); height_scale and step_scale multiply the defaults.
double weight_v_quadrature(double x, int k, double height_scale, double step_scale);

/// mn/d^2 over d | gcd(m, n), ascending.
std::vector<std::int64_t> hecke_expand(std::int64_t m, std::int64_t n);

struct ModformDiagonal {
    double sum_exact = 0.0;
    double euler_approx = 0.0;
    double ratio = 0.0;
    /// N <= sqrt(k)/100, vacuous at desk scale and only reported.
    bool admissible = false;
};

/// sum over support pairs of r(m) r(n) sigma(gcd(m, n)) / sqrt(mn), next to
/// prod (1 + r(p)^2 (1 + 1/p) + 2 r(p)/sqrt(p)).
ModformDiagonal m2_modform_diagonal(const CoefficientTable& table, int k);

} // namespace resonance
