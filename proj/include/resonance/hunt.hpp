#pragma once

#include "resonance/resonator.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace resonance {

/// Heuristic safety margin c in ratio - c / sqrt(T).
inline constexpr double kSafetyMargin = 10.0;

/// numerator/denominator - c / sqrt(T). Requires N <= T^0.9.
double guaranteed_lower_bound(const CoefficientTable& table, double T, double c = kSafetyMargin);

struct HuntConfig {
    double T = 1e5;
    double grid_step = 0.05;
    double top_fraction = 1e-3;
    /// When set, keep exactly this many peaks and ignore top_fraction.
    std::optional<std::size_t> top_count;
    int refine_iters = 40;
    std::uint64_t seed = 0;

    void validate() const;
};

struct ExtremeRecord {
    double location = 0.0;
    double resonator_value = 0.0;
    double target_value = 0.0;
    int rank = 0;
    std::string scheme;
};

struct ScanResult {
    std::vector<ExtremeRecord> records;
    std::size_t grid_points = 0;
    std::size_t peaks_found = 0;
    /// |R|^2 was constant on the grid; records are uniform samples instead.
    bool degenerate = false;
};

inline constexpr std::size_t kMaxScanGrid = std::size_t{1} << 31;

/// Grid |R|^2 over [T, 2T], pick the largest strict local maxima, refine
/// each by golden-section search within one grid step and evaluate |zeta|
/// there. Records are sorted by decreasing |zeta|.
ScanResult scan(const CoefficientTable& table, const HuntConfig& cfg);

/// `count` points uniform on [T, 2T] from a seeded mt19937_64.
std::vector<double> uniform_sample(double T, std::size_t count, std::uint64_t seed);

struct ThresholdEstimate {
    double V = 0.0;
    double fraction = 0.0;
    double ci = 0.0; // 95% binomial half-width
    std::size_t samples = 0;
};

ThresholdEstimate threshold_measure(double T, double V, std::size_t samples, std::uint64_t seed);

/// Same estimate for several thresholds on one shared sample set, so the
/// fractions are nonincreasing in V by construction.
std::vector<ThresholdEstimate> threshold_curve(double T, const std::vector<double>& Vs, std::size_t samples,
                                               std::uint64_t seed);

struct AChoice {
    double A = 0.0;
    /// exp(A log(log N / (4 A^2 log A))); only defined for A > 1.
    std::optional<double> gain;
};

/// A = V / log(log N / (4 V^2 log V)). Takes log N so that astronomically
/// large N can be explored.
AChoice choose_A(double V, double log_N);

struct R4Result {
    std::optional<double> exact;
    double euler_bound = 0.0;
    std::size_t pairs = 0;
};

/// sum over ab = cd of r(a) r(b) r(c) r(d), by grouping ordered support
/// pairs by their product; skipped when the pair count exceeds max_pairs.
R4Result r4_diagonal(const CoefficientTable& table, std::size_t max_pairs = 10'000'000);

struct FourthMomentDiagnostic {
    double m2 = 0.0;           // T Phi^(0) numerator
    double r4_integral = 0.0;  // T Phi^(0) r4
    double measure_floor = 0.0; // |M2|^4 / (T log^4 T r4_integral^2)
    double fraction_floor = 0.0; // measure_floor / T
};

/// The Cauchy-Schwarz measure floor, with the diagonal predictions standing
/// in for M2 and the fourth moment of R. Order-of-magnitude only.
FourthMomentDiagnostic fourth_moment_diagnostic(const CoefficientTable& table, double T);

} // namespace resonance
