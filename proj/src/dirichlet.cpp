#include "resonance/dirichlet.hpp"

#include "resonance/arith.hpp"
#include "resonance/error.hpp"
#include "resonance/parallel.hpp"
#include "resonance/random.hpp"
#include "resonance/special.hpp"
#include "resonance/summation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

namespace resonance {

using std::numbers::pi;

namespace {

// Gamma(s/2 + 1/4) / (Gamma(1/4) s) on s = 1 + iy; independent of xi.
struct WLine {
    std::vector<double> y;
    std::vector<double> weight;
    std::vector<std::complex<double>> gamma_over_s;

    WLine(double height, double step) {
        const auto n = static_cast<std::size_t>(std::ceil(height / step));
        const double h = height / static_cast<double>(n);
        const double lg14 = std::lgamma(0.25);
        y.resize(n + 1);
        weight.resize(n + 1);
        gamma_over_s.resize(n + 1);
        for (std::size_t j = 0; j <= n; ++j) {
            const double yj = static_cast<double>(j) * h;
            const std::complex<double> s{1.0, yj};
            y[j] = yj;
            weight[j] = (j == 0 || j == n ? 0.5 : 1.0) * h / pi;
            gamma_over_s[j] = std::exp(special::lgamma(0.5 * s + 0.25) - lg14) / s;
        }
    }

    double operator()(double xi) const {
        const double lx = std::log(xi);
        CompensatedSum acc;
        for (std::size_t j = 0; j < y.size(); ++j)
            acc += weight[j] * (gamma_over_s[j] * std::polar(1.0, -y[j] * lx)).real();
        return acc.value() / xi;
    }
};

} // namespace

double weight_w_direct(double xi, double height, double step) {
    if (!(xi > 0.0)) throw DomainError("weight_w: xi must be positive");
    return WLine(height, step)(xi);
}

struct WWeight::Impl {
    std::vector<double> values;
    std::once_flag filled;
    std::mutex mutex;

    static std::size_t node_count() { return static_cast<std::size_t>(std::ceil(std::sqrt(kWCutoff) / kGridStep)) + 3; }

    void fill() {
        std::call_once(filled, [this] {
            std::lock_guard lock(mutex);
            if (!values.empty()) return;
            const WLine line(kWHeight, kWStep);
            std::vector<double> v(node_count());
            v[0] = 1.0;
            for (std::size_t i = 1; i < v.size(); ++i) {
                const double u = static_cast<double>(i) * kGridStep;
                v[i] = line(u * u);
            }
            values = std::move(v);
        });
    }
};

WWeight::WWeight() : impl_(std::make_unique<Impl>()) {}
WWeight::~WWeight() = default;

WWeight& WWeight::instance() {
    static WWeight w;
    return w;
}

double WWeight::operator()(double xi) {
    if (!(xi > 0.0)) throw DomainError("weight_w: xi must be positive");
    if (xi >= kWCutoff) return 0.0;
    impl_->fill();
    const auto& v = impl_->values;
    const double pos = std::sqrt(xi) / kGridStep;
    auto base = static_cast<std::ptrdiff_t>(std::floor(pos)) - 1;
    base = std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(v.size()) - 4);
    const double u = pos - static_cast<double>(base);
    // Lagrange weights for nodes at offsets 0..3
    const double w0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    const double w1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    const double w2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    const double w3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    const auto b = static_cast<std::size_t>(base);
    return w0 * v[b] + w1 * v[b + 1] + w2 * v[b + 2] + w3 * v[b + 3];
}

void WWeight::save_cache(std::ostream& out) {
    impl_->fill();
    out << "# wweight.cache v1 ustep=" << format_double(kGridStep) << " height=" << format_double(kWHeight)
        << " step=" << format_double(kWStep) << "\n";
    for (std::size_t i = 0; i < impl_->values.size(); ++i) {
        const double u = static_cast<double>(i) * kGridStep;
        out << format_double(u * u) << " " << format_double(impl_->values[i]) << "\n";
    }
}

std::size_t WWeight::load_cache(std::istream& in) {
    std::string header;
    const std::string expect = "# wweight.cache v1 ustep=" + format_double(kGridStep) +
                               " height=" + format_double(kWHeight) + " step=" + format_double(kWStep);
    if (!std::getline(in, header) || header != expect) return 0;
    std::vector<double> v(Impl::node_count());
    std::size_t read = 0;
    double xi = 0.0, w = 0.0;
    while (read < v.size() && in >> xi >> w) {
        const double u = static_cast<double>(read) * kGridStep;
        if (std::fabs(xi - u * u) > 1e-12 * std::max(1.0, xi)) return 0;
        v[read++] = w;
    }
    if (read != v.size()) return 0;
    std::call_once(impl_->filled, [] {});
    std::lock_guard lock(impl_->mutex);
    impl_->values = std::move(v);
    return read;
}

double weight_w(double xi) { return WWeight::instance()(xi); }

DiscriminantRecord l_half_truncated(std::int64_t d, std::int64_t n_max) {
    if (d < 1 || d % 2 == 0 || !arith::mu_and_squarefree(d).squarefree)
        throw DomainError("l_half: d must be odd, squarefree and positive, got " + std::to_string(d));
    if (n_max < 1) throw DomainError("l_half: cutoff must be >= 1");
    const std::int64_t disc = arith::checked_mul(8, d);
    const double scale = std::sqrt(pi) / std::sqrt(static_cast<double>(disc));
    auto& W = WWeight::instance();
    CompensatedSum sum, size, weight_err;
    for (std::int64_t n = 1; n <= n_max; n += 2) {
        const int chi = arith::kronecker(disc, n);
        if (chi == 0) continue;
        const double xi = static_cast<double>(n) * scale;
        if (xi >= kWCutoff) break;
        const double inv = 1.0 / std::sqrt(static_cast<double>(n));
        const double term = chi * inv * W(xi);
        sum += term;
        size += std::fabs(term);
        weight_err += inv;
    }
    // tail: sum_{n > n_max} n^-1/2 e^{-n scale} as a geometric series
    const double next = static_cast<double>(n_max + 1);
    const double tail = std::exp(-next * scale) / std::sqrt(next) / (-std::expm1(-scale));

    DiscriminantRecord rec;
    rec.d = d;
    rec.disc = disc;
    rec.L_value = 2.0 * sum.value();
    rec.truncation = n_max;
    rec.est_error = 2.0 * tail + 8.0 * std::numeric_limits<double>::epsilon() * size.value() +
                    2.0 * kWTableError * weight_err.value();
    return rec;
}

DiscriminantRecord l_half(std::int64_t d) {
    if (d < 1) throw DomainError("l_half: d must be positive");
    const double root = std::sqrt(8.0 * static_cast<double>(d));
    auto n_max = static_cast<std::int64_t>(std::ceil(45.0 * root / std::sqrt(pi)));
    while (n_max > 1 && static_cast<double>(n_max - 1) * std::sqrt(pi) / root >= 45.0) --n_max;
    return l_half_truncated(d, std::max<std::int64_t>(n_max, 1));
}

double char_sum(std::int64_t n, std::int64_t lo, std::int64_t hi) {
    if (n < 1 || n % 2 == 0) throw DomainError("char_sum: n must be odd and positive");
    lo = std::max<std::int64_t>(lo, 1);
    if (hi < lo) return 0.0;
    const auto flags = arith::squarefree_flags(lo, hi);
    std::int64_t acc = 0;
    for (std::int64_t d = lo; d <= hi; ++d) {
        if (d % 2 == 0 || !flags[static_cast<std::size_t>(d - lo)]) continue;
        acc += arith::kronecker(8 * d, n);
    }
    return static_cast<double>(acc);
}

namespace {

bool is_square(std::int64_t n) {
    auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r * r == n;
}

} // namespace

CharSumCheck char_sum_check(std::int64_t n, std::int64_t z) {
    if (n < 1 || n % 2 == 0) throw DomainError("char_sum_check: n must be odd and positive");
    if (z < 3) throw DomainError("char_sum_check: z must be >= 3");
    CharSumCheck c;
    c.n = n;
    c.z = z;
    c.observed = char_sum(n, 1, z);
    c.square = is_square(n);
    const double zd = static_cast<double>(z);
    if (c.square) {
        double prod = 2.0 / 3.0;
        for (const auto& [p, e] : arith::factorize(n).factors) prod *= static_cast<double>(p) / static_cast<double>(p + 1);
        c.predicted = zd * 6.0 / (pi * pi) * prod;
        c.bound = 10.0 * std::sqrt(zd);
    } else {
        c.bound = 10.0 * std::sqrt(zd) * std::pow(static_cast<double>(n), 0.25) * std::log(2.0 * static_cast<double>(n));
    }
    c.within = std::fabs(c.observed - c.predicted) <= c.bound;
    return c;
}

namespace {

void require_odd_support(const CoefficientTable& table, const char* who) {
    for (const auto& e : table.entries())
        if (e.n % 2 == 0) throw DomainError(std::string(who) + ": support contains even n = " + std::to_string(e.n));
}

} // namespace

QuadraticFirstMoment m1_quadratic(const CoefficientTable& table, double X) {
    require_odd_support(table, "m1_quadratic");
    if (!(X > 0.0)) throw DomainError("m1_quadratic: X must be positive");
    QuadraticFirstMoment q;
    CompensatedSum acc;
    for (std::size_t i = 0; i < table.size(); ++i) {
        double w = 2.0 / 3.0;
        for (const auto& [p, e] : table.factors(i)) w *= static_cast<double>(p) / static_cast<double>(p + 1);
        const double r = table.entries()[i].r;
        acc += r * r * w;
    }
    q.sum_main = acc.value();
    double log_prod = std::log(2.0 / 3.0);
    for (const auto& pv : table.prime_values()) {
        const double p = static_cast<double>(pv.p);
        log_prod += std::log1p(pv.r * pv.r * p / (p + 1.0));
    }
    q.euler_main = std::exp(log_prod);
    q.scaled_main = X / (16.0 * pi * pi / 6.0) * q.sum_main;
    return q;
}

double m1_quadratic_pairs(const CoefficientTable& table) {
    require_odd_support(table, "m1_quadratic_pairs");
    const auto e = table.entries();
    CompensatedSum acc;
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = 0; j < e.size(); ++j) {
            const std::int64_t prod = arith::checked_mul(e[i].n, e[j].n);
            if (!is_square(prod)) continue;
            std::vector<std::int64_t> primes{2};
            for (const auto& [p, k] : arith::factorize(e[i].n).factors) primes.push_back(p);
            for (const auto& [p, k] : arith::factorize(e[j].n).factors) primes.push_back(p);
            std::sort(primes.begin(), primes.end());
            primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
            double w = 1.0;
            for (auto p : primes) w *= static_cast<double>(p) / static_cast<double>(p + 1);
            acc += e[i].r * e[j].r * w;
        }
    return acc.value();
}

QuadraticSecondMoment m2_main(const CoefficientTable& table, double X) {
    const Scheme sc = table.spec().scheme;
    if (sc != Scheme::dirichlet_f && sc != Scheme::dirichlet_signed && sc != Scheme::custom)
        throw DomainError("m2_main: needs a dirichlet-f or dirichlet-signed table");
    require_odd_support(table, "m2_main");
    if (!(X > 1.0)) throw DomainError("m2_main: X must exceed 1");

    const auto e = table.entries();
    const std::size_t n = e.size();
    const std::int64_t N = table.support_bound();
    std::vector<double> hval(n), lcorr(n), logn(n), sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        double h = 1.0, lc = 0.0;
        for (const auto& [p, k] : table.factors(i)) {
            const double pd = static_cast<double>(p);
            h *= std::pow(pd * pd / (pd * pd + pd - 1.0), k);
            lc += std::log(pd) / (pd * (pd + 1.0));
        }
        hval[i] = h;
        lcorr[i] = lc;
        logn[i] = std::log(static_cast<double>(e[i].n));
        sq[i] = std::sqrt(static_cast<double>(e[i].n));
    }

    const double lX = std::log(X);
    QuadraticSecondMoment res;
    CompensatedSum acc;
    std::vector<std::size_t> partners;
    for (std::size_t a = 0; a < n; ++a) {
        const std::int64_t na = e[a].n;
        partners.clear();
        for (std::size_t r = 0; r < n && e[r].n <= N / na; ++r)
            if (arith::gcd(na, e[r].n) == 1) partners.push_back(r);
        const double wa = e[a].r * e[a].r * hval[a];
        if (wa == 0.0) continue;
        for (std::size_t r : partners) {
            const double wr = e[r].r * hval[r] / sq[r];
            for (std::size_t s : partners) {
                if (arith::gcd(e[r].n, e[s].n) != 1) continue;
                if (++res.triples > kMaxTriples)
                    throw ResourceError("m2_main: more than 10^6 support triples; use a smaller N or window");
                const double ws = e[s].r * hval[s] / sq[s];
                acc += wa * wr * ws * (lX - logn[r] - logn[s] - lcorr[a] - lcorr[r] - lcorr[s]);
            }
        }
    }
    res.triple_sum = acc.value();

    double log_prod = 0.0;
    for (const auto& pv : table.prime_values()) {
        const double factor = 1.0 + pv.r * pv.r + 2.0 * pv.r / std::sqrt(static_cast<double>(pv.p));
        if (!(factor > 0.0))
            throw DomainError("m2_main: Euler factor not positive at p = " + std::to_string(pv.p));
        log_prod += std::log(factor);
    }
    res.euler_approx = lX * std::exp(log_prod);
    return res;
}

std::vector<std::int64_t> discriminant_range(double X) {
    if (!(X >= 16.0) || X > 1e8) throw DomainError("discriminant range: X must lie in [16, 1e8]");
    const auto lo = static_cast<std::int64_t>(std::ceil(X / 16.0));
    const auto hi = static_cast<std::int64_t>(std::floor(X / 8.0));
    std::vector<std::int64_t> out;
    if (hi < lo) return out;
    const auto flags = arith::squarefree_flags(lo, hi);
    for (std::int64_t d = lo; d <= hi; ++d)
        if (d % 2 == 1 && flags[static_cast<std::size_t>(d - lo)]) out.push_back(d);
    return out;
}

double resonator_at(const CoefficientTable& table, std::int64_t d) {
    const std::int64_t disc = 8 * d;
    CompensatedSum acc;
    for (const auto& e : table.entries()) acc += e.r * arith::kronecker(disc, e.n);
    return acc.value();
}

namespace {

std::vector<DiscriminantRecord> evaluate_l(const std::vector<std::int64_t>& ds) {
    std::vector<DiscriminantRecord> out(ds.size());
    parallel::for_chunks((ds.size() + 7) / 8, [&](std::size_t c) {
        const std::size_t hi = std::min(ds.size(), (c + 1) * 8);
        for (std::size_t i = c * 8; i < hi; ++i) out[i] = l_half(ds[i]);
    });
    return out;
}

} // namespace

std::vector<DiscriminantRecord> hunt_discriminants(const ResonatorSpec& spec, double X, HuntMode mode,
                                                   std::size_t budget) {
    if (budget < 1) throw DomainError("hunt_discriminants: budget must be >= 1");
    const auto ds = discriminant_range(X);
    const ResonatorSpec s = spec.scheme == Scheme::custom ? spec : spec.with_sign(mode == HuntMode::small);
    const auto table = build_table(s);
    require_odd_support(table, "hunt_discriminants");

    std::vector<double> rv(ds.size());
    parallel::for_chunks((ds.size() + 1023) / 1024, [&](std::size_t c) {
        const std::size_t hi = std::min(ds.size(), (c + 1) * 1024);
        for (std::size_t i = c * 1024; i < hi; ++i) {
            const double r = resonator_at(table, ds[i]);
            rv[i] = r * r;
        }
    });
    std::vector<std::size_t> order(ds.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const std::size_t k = std::min(budget, order.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) { return rv[a] != rv[b] ? rv[a] > rv[b] : a < b; });
    order.resize(k);

    std::vector<std::int64_t> picked;
    for (auto i : order) picked.push_back(ds[i]);
    auto recs = evaluate_l(picked);
    for (std::size_t i = 0; i < k; ++i) recs[i].resonator_value = rv[order[i]];
    std::sort(recs.begin(), recs.end(), [mode](const DiscriminantRecord& a, const DiscriminantRecord& b) {
        if (a.L_value != b.L_value) return mode == HuntMode::small ? a.L_value < b.L_value : a.L_value > b.L_value;
        return a.d < b.d;
    });
    return recs;
}

std::vector<DiscriminantRecord> random_discriminants(double X, std::size_t count, std::uint64_t seed) {
    const auto ds = discriminant_range(X);
    if (ds.empty()) throw DomainError("random_discriminants: empty d-range");
    std::mt19937_64 rng(seed);
    std::vector<std::int64_t> picked(count);
    for (auto& d : picked) {
        const auto i = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(ds.size()));
        d = ds[std::min(i, ds.size() - 1)];
    }
    return evaluate_l(picked);
}

} // namespace resonance
