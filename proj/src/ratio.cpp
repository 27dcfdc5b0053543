#include "resonance/ratio.hpp"

#include "resonance/error.hpp"
#include "resonance/parallel.hpp"
#include "resonance/summation.hpp"

#include <cmath>
#include <sstream>

namespace resonance {

namespace {
constexpr std::size_t kRowBlock = 2048;
}

DivisorFormMatrix::DivisorFormMatrix(std::int64_t N, std::int64_t cap) : N_(N) {
    if (N < 1) throw DomainError("build_matrix: N must be >= 1");
    if (N > cap) throw ResourceError("build_matrix: N=" + std::to_string(N) + " above cap " + std::to_string(cap));

    const auto n = static_cast<std::size_t>(N);
    std::vector<std::size_t> degree(n, 0);
    for (std::int64_t m = 1; m <= N; ++m)
        for (std::int64_t k = 2 * m; k <= N; k += m) {
            ++degree[static_cast<std::size_t>(m - 1)];
            ++degree[static_cast<std::size_t>(k - 1)];
            ++nnz_;
        }
    nnz_ += n;

    row_start_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) row_start_[i + 1] = row_start_[i] + degree[i];
    col_.resize(row_start_[n]);
    weight_.resize(row_start_[n]);

    std::vector<std::size_t> fill(row_start_.begin(), row_start_.end() - 1);
    // ascending m then ascending multiple keeps every row sorted by column
    for (std::int64_t m = 1; m <= N; ++m) {
        for (std::int64_t k = 2 * m; k <= N; k += m) {
            const double w = 0.5 / std::sqrt(static_cast<double>(k / m));
            const auto im = static_cast<std::size_t>(m - 1);
            const auto ik = static_cast<std::size_t>(k - 1);
            col_[fill[ik]] = static_cast<std::uint32_t>(im);
            weight_[fill[ik]++] = w;
            col_[fill[im]] = static_cast<std::uint32_t>(ik);
            weight_[fill[im]++] = w;
        }
    }
}

double DivisorFormMatrix::entry(std::int64_t m, std::int64_t n) const {
    if (m < 1 || n < 1 || m > N_ || n > N_) throw DomainError("DivisorFormMatrix::entry: index out of range");
    if (m == n) return 1.0;
    if (m > n) std::swap(m, n);
    return n % m == 0 ? 0.5 / std::sqrt(static_cast<double>(n / m)) : 0.0;
}

void DivisorFormMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    const auto n = static_cast<std::size_t>(N_);
    if (x.size() != n || y.size() != n) throw DomainError("DivisorFormMatrix::multiply: size mismatch");
    const std::size_t chunks = (n + kRowBlock - 1) / kRowBlock;
    parallel::for_chunks(chunks, [&](std::size_t c) {
        const std::size_t lo = c * kRowBlock;
        const std::size_t hi = std::min(n, lo + kRowBlock);
        for (std::size_t i = lo; i < hi; ++i) {
            double acc = x[i];
            for (std::size_t j = row_start_[i]; j < row_start_[i + 1]; ++j) acc += weight_[j] * x[col_[j]];
            y[i] = acc;
        }
    });
}

double DivisorFormMatrix::quadratic_form(std::span<const double> x) const {
    std::vector<double> y(x.size());
    multiply(x, y);
    CompensatedSum acc;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
    return acc.value();
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    CompensatedSum acc;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc.value();
}

} // namespace

EigenResult max_ratio_eigen(std::int64_t N, const PowerIterationOptions& opts) {
    if (!(opts.tol > 0.0)) throw DomainError("max_ratio_eigen: tol must be > 0");
    const DivisorFormMatrix B(N, opts.cap);
    const auto n = static_cast<std::size_t>(N);

    EigenResult res;
    std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> y(n);
    double previous = 0.0;
    for (int it = 1; it <= opts.max_iterations; ++it) {
        B.multiply(x, y);
        const double rayleigh = dot(x, y);
        const double norm = std::sqrt(dot(y, y));
        for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
        if (it > 1 && std::fabs(rayleigh - previous) < opts.tol) {
            B.multiply(x, y);
            res.lambda_max = dot(x, y);
            res.vector = std::move(x);
            res.iterations = it;
            return res;
        }
        previous = rayleigh;
        if (n == 1) {
            res.lambda_max = rayleigh;
            res.vector = std::move(x);
            res.iterations = it;
            return res;
        }
    }
    std::ostringstream os;
    os.precision(17);
    os << "max_ratio_eigen: no convergence after " << opts.max_iterations
       << " iterations; last Rayleigh quotient " << previous;
    throw IterationError(os.str());
}

std::vector<double> dense_coefficients(const CoefficientTable& table) {
    std::vector<double> v(static_cast<std::size_t>(table.support_bound()), 0.0);
    for (const auto& e : table.entries()) v[static_cast<std::size_t>(e.n - 1)] = e.r;
    return v;
}

CoefficientTable table_from_vector(std::span<const double> v) {
    ResonatorSpec spec;
    spec.scheme = Scheme::custom;
    spec.N = static_cast<std::int64_t>(v.size());
    std::vector<TableEntry> entries;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0.0) entries.push_back({static_cast<std::int64_t>(i + 1), v[i]});
    return CoefficientTable::from_entries(spec, std::move(entries));
}

HeuristicComparison compare_heuristic(const CoefficientTable& table, const PowerIterationOptions& opts) {
    HeuristicComparison out;
    out.N = table.support_bound();
    const double den = denominator_exact(table);
    if (!(den > 0.0)) throw DomainError("compare_heuristic: table has zero denominator");
    out.heuristic_ratio = numerator_exact(table) / den;
    const auto eig = max_ratio_eigen(out.N, opts);
    out.lambda_max = eig.lambda_max;
    out.iterations = eig.iterations;
    out.gap = out.lambda_max - out.heuristic_ratio;
    if (out.heuristic_ratio > out.lambda_max * (1.0 + 1e-9))
        throw IterationError("compare_heuristic: heuristic ratio exceeds lambda_max; eigen iteration not converged");
    return out;
}

} // namespace resonance
