#include "resonance/hunt.hpp"

#include "resonance/error.hpp"
#include "resonance/parallel.hpp"
#include "resonance/random.hpp"
#include "resonance/summation.hpp"
#include "resonance/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace resonance {

double guaranteed_lower_bound(const CoefficientTable& table, double T, double c) {
    if (!(T > 1.0)) throw DomainError("guaranteed_lower_bound: T must exceed 1");
    if (static_cast<double>(table.support_bound()) > std::pow(T, 0.9))
        throw DomainError("guaranteed_lower_bound: N exceeds T^0.9");
    const double den = denominator_exact(table);
    if (!(den > 0.0)) throw DomainError("guaranteed_lower_bound: table has no nonzero coefficient");
    return numerator_exact(table) / den - c / std::sqrt(T);
}

void HuntConfig::validate() const {
    if (!(T >= kRiemannSiegelFloor) || !std::isfinite(T)) throw DomainError("hunt: T must be >= 30");
    if (!(grid_step > 0.0)) throw DomainError("hunt: grid_step must be positive");
    if (!(top_fraction > 0.0 && top_fraction <= 1.0)) throw DomainError("hunt: top_fraction must lie in (0, 1]");
    if (top_count && *top_count == 0) throw DomainError("hunt: top_count must be positive");
    if (refine_iters < 0) throw DomainError("hunt: refine_iters must be >= 0");
}

std::vector<double> uniform_sample(double T, std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> out(count);
    for (auto& t : out) t = T + T * uniform01(rng);
    return out;
}

namespace {

struct Peak {
    std::size_t index;
    double value;
};

double golden_max(const DirichletPolynomial& poly, double a, double b, int iters) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = std::norm(poly(x1)), f2 = std::norm(poly(x2));
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = std::norm(poly(x2));
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = std::norm(poly(x1));
        }
    }
    return f1 < f2 ? x2 : x1;
}

std::vector<ExtremeRecord> evaluate_points(const DirichletPolynomial& poly, const std::vector<double>& ts,
                                           const std::string& scheme) {
    std::vector<ExtremeRecord> out(ts.size());
    parallel::for_chunks((ts.size() + 63) / 64, [&](std::size_t c) {
        const std::size_t hi = std::min(ts.size(), (c + 1) * 64);
        for (std::size_t i = c * 64; i < hi; ++i) {
            out[i].location = ts[i];
            out[i].resonator_value = std::norm(poly(ts[i]));
            out[i].target_value = std::abs(zeta_half(ts[i]).value);
            out[i].scheme = scheme;
        }
    });
    return out;
}

void rank_records(std::vector<ExtremeRecord>& recs) {
    std::sort(recs.begin(), recs.end(), [](const ExtremeRecord& a, const ExtremeRecord& b) {
        if (a.target_value != b.target_value) return a.target_value > b.target_value;
        return a.location < b.location;
    });
    for (std::size_t i = 0; i < recs.size(); ++i) recs[i].rank = static_cast<int>(i + 1);
}

} // namespace

ScanResult scan(const CoefficientTable& table, const HuntConfig& cfg) {
    cfg.validate();
    const double h = cfg.grid_step;
    const double span = std::floor(cfg.T / h);
    if (span + 1.0 > static_cast<double>(kMaxScanGrid))
        throw ResourceError("scan: grid would exceed 2^31 points; raise grid_step");
    const auto count = static_cast<std::size_t>(span) + 1;

    const DirichletPolynomial poly(table);
    const std::string scheme = table.spec().summary();

    constexpr std::size_t kChunk = 1 << 16;
    constexpr std::size_t kLook = 256;
    struct ChunkOut {
        std::vector<Peak> peaks;
        double lo = INFINITY, hi = -INFINITY;
    };
    const std::size_t chunks = (count + kChunk - 1) / kChunk;
    std::vector<ChunkOut> parts(chunks);
    parallel::for_chunks(chunks, [&](std::size_t c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(count, lo + kChunk);
        const std::size_t from = lo == 0 ? 0 : lo - 1;
        const std::size_t to = std::min(count, hi + kLook);
        const auto v = poly.squared_magnitude_grid(cfg.T + static_cast<double>(from) * h, h, to - from);
        auto& out = parts[c];
        for (std::size_t j = lo; j < hi; ++j) {
            const double x = v[j - from];
            out.lo = std::min(out.lo, x);
            out.hi = std::max(out.hi, x);
            if (j == 0 || j + 1 >= count) continue;
            if (!(x > v[j - 1 - from])) continue;
            // leftmost point of a plateau counts if the plateau then falls
            std::size_t k = j + 1;
            while (k < to && v[k - from] == x) ++k;
            if (k == to && to == count) continue;
            if (k == to || v[k - from] < x) out.peaks.push_back({j, x});
        }
    });

    ScanResult res;
    res.grid_points = count;
    double gmin = INFINITY, gmax = -INFINITY;
    std::vector<Peak> peaks;
    for (auto& p : parts) {
        gmin = std::min(gmin, p.lo);
        gmax = std::max(gmax, p.hi);
        peaks.insert(peaks.end(), p.peaks.begin(), p.peaks.end());
    }
    res.peaks_found = peaks.size();

    auto want = [&](std::size_t available) {
        if (cfg.top_count) return std::min(*cfg.top_count, available);
        const auto k = static_cast<std::size_t>(std::ceil(cfg.top_fraction * static_cast<double>(available)));
        return std::clamp<std::size_t>(k, 1, available);
    };

    if (peaks.empty() || gmax - gmin <= 1e-12 * std::fabs(gmax)) {
        res.degenerate = true;
        const std::size_t k = want(count);
        res.records = evaluate_points(poly, uniform_sample(cfg.T, k, cfg.seed), scheme);
        rank_records(res.records);
        return res;
    }

    const std::size_t k = want(peaks.size());
    std::partial_sort(peaks.begin(), peaks.begin() + static_cast<std::ptrdiff_t>(k), peaks.end(),
                      [](const Peak& a, const Peak& b) {
                          if (a.value != b.value) return a.value > b.value;
                          return a.index < b.index;
                      });
    peaks.resize(k);

    std::vector<double> ts(k);
    parallel::for_chunks((k + 63) / 64, [&](std::size_t c) {
        const std::size_t hi = std::min(k, (c + 1) * 64);
        for (std::size_t i = c * 64; i < hi; ++i) {
            const double t0 = cfg.T + static_cast<double>(peaks[i].index) * h;
            double t = t0;
            if (cfg.refine_iters > 0) {
                const double cand = golden_max(poly, t0 - h, t0 + h, cfg.refine_iters);
                if (std::norm(poly(cand)) > std::norm(poly(t0))) t = cand;
            }
            ts[i] = t;
        }
    });
    res.records = evaluate_points(poly, ts, scheme);
    rank_records(res.records);
    return res;
}

std::vector<ThresholdEstimate> threshold_curve(double T, const std::vector<double>& Vs, std::size_t samples,
                                               std::uint64_t seed) {
    if (samples < 1000) throw DomainError("threshold_measure: need at least 1000 samples");
    if (!(T >= 1.0)) throw DomainError("threshold_measure: T must be >= 1");
    const auto ts = uniform_sample(T, samples, seed);
    std::vector<double> mag(samples);
    parallel::for_chunks((samples + 255) / 256, [&](std::size_t c) {
        const std::size_t hi = std::min(samples, (c + 1) * 256);
        for (std::size_t i = c * 256; i < hi; ++i) mag[i] = std::abs(zeta_half(ts[i]).value);
    });
    std::vector<ThresholdEstimate> out;
    for (double V : Vs) {
        const double level = std::exp(V);
        const auto hits = std::count_if(mag.begin(), mag.end(), [level](double m) { return m >= level; });
        ThresholdEstimate e;
        e.V = V;
        e.samples = samples;
        e.fraction = static_cast<double>(hits) / static_cast<double>(samples);
        e.ci = 1.96 * std::sqrt(e.fraction * (1.0 - e.fraction) / static_cast<double>(samples));
        out.push_back(e);
    }
    return out;
}

ThresholdEstimate threshold_measure(double T, double V, std::size_t samples, std::uint64_t seed) {
    return threshold_curve(T, {V}, samples, seed).front();
}

AChoice choose_A(double V, double log_N) {
    if (!(V >= 3.0)) throw DomainError("choose_A: V must be >= 3");
    const double arg = log_N / (4.0 * V * V * std::log(V));
    if (!(arg > std::exp(1.0)))
        throw DomainError("choose_A: V too large for this N (log N must exceed 4 e V^2 log V)");
    AChoice c;
    c.A = V / std::log(arg);
    if (c.A > 1.0) {
        const double inner = log_N / (4.0 * c.A * c.A * std::log(c.A));
        c.gain = std::exp(c.A * std::log(inner));
    }
    return c;
}

R4Result r4_diagonal(const CoefficientTable& table, std::size_t max_pairs) {
    R4Result res;
    res.euler_bound = euler_product(table, EulerForm::fourth);
    const auto e = table.entries();
    const std::size_t n = e.size();
    res.pairs = n * n;
    if (n != 0 && res.pairs / n != n) return res;
    if (res.pairs > max_pairs) return res;

    struct Item {
        unsigned __int128 key;
        double value;
    };
    std::vector<Item> items;
    items.reserve(n * (n + 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const auto key = static_cast<unsigned __int128>(e[i].n) * static_cast<unsigned __int128>(e[j].n);
            items.push_back({key, (i == j ? 1.0 : 2.0) * e[i].r * e[j].r});
        }
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.key < b.key; });
    CompensatedSum total;
    for (std::size_t i = 0; i < items.size();) {
        CompensatedSum group;
        std::size_t j = i;
        for (; j < items.size() && items[j].key == items[i].key; ++j) group += items[j].value;
        total += group.value() * group.value();
        i = j;
    }
    res.exact = total.value();
    return res;
}

FourthMomentDiagnostic fourth_moment_diagnostic(const CoefficientTable& table, double T) {
    if (!(T > std::exp(1.0))) throw DomainError("fourth_moment_diagnostic: T must exceed e");
    const auto r4 = r4_diagonal(table);
    const double scale = T * SmoothWindow::instance().phi_hat0();
    FourthMomentDiagnostic d;
    d.m2 = scale * numerator_exact(table);
    d.r4_integral = scale * r4.exact.value_or(r4.euler_bound);
    const double lt = std::log(T);
    d.measure_floor = std::pow(std::fabs(d.m2), 4) / (T * std::pow(lt, 4) * d.r4_integral * d.r4_integral);
    d.fraction_floor = d.measure_floor / T;
    return d;
}

} // namespace resonance
