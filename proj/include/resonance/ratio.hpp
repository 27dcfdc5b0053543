#pragma once

#include "resonance/resonator.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace resonance {

/// Symmetric matrix of the quadratic form r -> sum_{mk<=N} r(m) r(mk)/sqrt(k):
/// B[n][n] = 1 and B[m][n] = 1/(2 sqrt(n/m)) when m | n, m < n.
/// Rows hold every neighbour (divisors and multiples), so a product is a
/// plain row-by-row gather.
class DivisorFormMatrix {
public:
    static constexpr std::int64_t kDefaultCap = 20000;

    explicit DivisorFormMatrix(std::int64_t N, std::int64_t cap = kDefaultCap);

    std::int64_t dimension() const { return N_; }
    /// Stored pairs m | n including the diagonal: sum_{n<=N} d(n).
    std::size_t nnz() const { return nnz_; }
    double entry(std::int64_t m, std::int64_t n) const;

    /// y = B x, with x and y indexed 0..N-1 for n = 1..N.
    void multiply(std::span<const double> x, std::span<double> y) const;
    double quadratic_form(std::span<const double> x) const;

private:
    std::int64_t N_;
    std::size_t nnz_ = 0;
    std::vector<std::size_t> row_start_;
    std::vector<std::uint32_t> col_;
    std::vector<double> weight_;
};

struct EigenResult {
    double lambda_max = 0.0;
    std::vector<double> vector;
    int iterations = 0;
};

struct PowerIterationOptions {
    double tol = 1e-10;
    int max_iterations = 100000;
    std::int64_t cap = DivisorFormMatrix::kDefaultCap;
};

/// Largest eigenvalue of B by power iteration from the all-ones vector;
/// stops once successive Rayleigh quotients differ by less than tol.
EigenResult max_ratio_eigen(std::int64_t N, const PowerIterationOptions& opts = {});

/// The dense vector of a table over n = 1..N.
std::vector<double> dense_coefficients(const CoefficientTable& table);

/// Turns a dense vector over n = 1..N into a custom table.
CoefficientTable table_from_vector(std::span<const double> v);

struct HeuristicComparison {
    std::int64_t N = 0;
    double heuristic_ratio = 0.0;
    double lambda_max = 0.0;
    double gap = 0.0;
    int iterations = 0;
};

/// Ratio numerator_exact/denominator_exact of the table against lambda_max(N).
/// Throws IterationError if the ratio exceeds lambda_max (1 + 1e-9).
HeuristicComparison compare_heuristic(const CoefficientTable& table, const PowerIterationOptions& opts = {});

} // namespace resonance
