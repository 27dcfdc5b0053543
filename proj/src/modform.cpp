#include "resonance/modform.hpp"

#include "resonance/arith.hpp"
#include "resonance/error.hpp"
#include "resonance/parallel.hpp"
#include "resonance/special.hpp"
#include "resonance/summation.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace resonance {

using std::numbers::pi;

double kloosterman(std::int64_t m, std::int64_t n, std::int64_t c) {
    if (c < 1) throw DomainError("kloosterman: c must be >= 1");
    if (c > 1'000'000) throw ResourceError("kloosterman: c above 10^6");
    if (c == 1) return 1.0;
    const std::int64_t mm = ((m % c) + c) % c;
    const std::int64_t nn = ((n % c) + c) % c;
    CompensatedSum re, im;
    for (std::int64_t a = 1; a < c; ++a) {
        if (arith::gcd(a, c) != 1) continue;
        const std::int64_t inv = arith::mod_inverse(a, c);
        const auto k = static_cast<std::int64_t>((static_cast<__int128>(a) * mm + static_cast<__int128>(inv) * nn) % c);
        const double angle = 2.0 * pi * static_cast<double>(k) / static_cast<double>(c);
        re += std::cos(angle);
        im += std::sin(angle);
    }
    if (std::fabs(im.value()) > 1e-12 * static_cast<double>(c))
        throw PrecisionError("kloosterman: imaginary part " + std::to_string(im.value()) + " is not negligible");
    return re.value();
}

BesselValue bessel_j(int order, double x) {
    if (order < 0) throw DomainError("bessel_j: order must be >= 0");
    if (!(x >= 0.0) || x > 2.0 * (order + 1))
        throw DomainError("bessel_j: x outside the series regime 0 <= x <= 2 (order + 1)");
    BesselValue out;
    const long double half = static_cast<long double>(x) / 2.0L;
    const long double lfact = std::lgamma(static_cast<long double>(order) + 1.0L);
    if (x == 0.0) {
        out.value = order == 0 ? 1.0 : 0.0;
        out.paper_bound = order == 0 ? 1.0 : 0.0;
        return out;
    }
    const long double lead = static_cast<long double>(order) * std::log(half) - lfact;
    out.paper_bound = static_cast<double>(std::exp(half + lead));
    // terms relative to (x/2)^order / order!
    long double term = 1.0L, sum = 1.0L, size = 1.0L;
    const long double q = half * half;
    for (int j = 1; j < 10000; ++j) {
        term *= -q / (static_cast<long double>(j) * static_cast<long double>(j + order));
        sum += term;
        size += std::fabs(term);
        if (std::fabs(term) < 1e-21L * std::fabs(sum) && static_cast<long double>(j) > half) break;
    }
    // near x = 2 order the alternating series cancels away most of the long
    // double digits; hand over to Boost there
    if (size > 1e5L * std::fabs(sum))
        out.value = boost::math::cyl_bessel_j(order, x);
    else
        out.value = static_cast<double>(sum * std::exp(lead));
    return out;
}

void PeterssonParams::validate() const {
    if (k < 12 || k % 2 != 0) throw DomainError("petersson: k must be even and >= 12");
    if (m < 1 || n < 1) throw DomainError("petersson: m and n must be positive");
    if (c_max < 0) throw DomainError("petersson: c_max must be >= 0 (0 = automatic)");
    if (4.0 * pi * std::sqrt(static_cast<double>(m) * static_cast<double>(n)) > 2.0 * k)
        throw DomainError("petersson: 4 pi sqrt(mn) exceeds 2k, outside the Bessel series regime");
}

bool PeterssonParams::in_regime() const {
    return 4.0 * pi * std::sqrt(static_cast<double>(m) * static_cast<double>(n)) <= k / 10.0;
}

double petersson_tail_bound(int k, std::int64_t m, std::int64_t n, std::int64_t c_max) {
    const double root = std::sqrt(static_cast<double>(m) * static_cast<double>(n));
    const double C = static_cast<double>(std::max<std::int64_t>(c_max, 1));
    const double x_next = 4.0 * pi * root / (C + 1.0);
    const double log_bound = std::log(2.0 * pi) + x_next / 2.0 + (k - 1) * std::log(2.0 * pi * root) -
                             std::lgamma(static_cast<double>(k)) - (k - 2) * std::log(C) - std::log(k - 2.0);
    return std::exp(log_bound);
}

PeterssonResult petersson_rhs(const PeterssonParams& params) {
    params.validate();
    PeterssonResult res;
    res.in_regime = params.in_regime();
    res.delta = params.m == params.n ? 1 : 0;
    std::int64_t C = params.c_max;
    if (C == 0) {
        C = 1;
        while (C < kPeterssonMaxC && petersson_tail_bound(params.k, params.m, params.n, C) > kPeterssonTailTarget) ++C;
    }
    res.c_max = C;
    res.tail_bound = petersson_tail_bound(params.k, params.m, params.n, C);

    const double root = std::sqrt(static_cast<double>(params.m) * static_cast<double>(params.n));
    std::vector<double> terms(static_cast<std::size_t>(C));
    parallel::for_chunks((terms.size() + 63) / 64, [&](std::size_t chunk) {
        const std::size_t hi = std::min(terms.size(), (chunk + 1) * 64);
        for (std::size_t i = chunk * 64; i < hi; ++i) {
            const auto c = static_cast<std::int64_t>(i + 1);
            const double x = 4.0 * pi * root / static_cast<double>(c);
            terms[i] = kloosterman(params.m, params.n, c) / static_cast<double>(c) * bessel_j(params.k - 1, x).value;
        }
    });
    CompensatedSum acc;
    for (double t : terms) acc += t;
    const double sign = params.k % 4 == 0 ? 1.0 : -1.0;
    res.value = res.delta + 2.0 * pi * sign * acc.value();
    return res;
}

namespace {

// Re s where psi(Re s + k/2) = log(2 pi x), i.e. where the integrand's
// modulus is stationary along the real axis.
double v_line(double x, int k) {
    const double target = std::log(2.0 * pi * x);
    const double half = k / 2.0;
    double lo = -half + 0.5, hi = std::max(4.0, 4.0 * 2.0 * pi * x);
    if (special::digamma(lo + half) >= target) return lo;
    while (special::digamma(hi + half) < target) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (special::digamma(mid + half) < target ? lo : hi) = mid;
    }
    double c = 0.5 * (lo + hi);
    if (c > -1.0 && c < 2.0) c = 2.0;
    return std::max(c, -half + 0.5);
}

} // namespace

double weight_v_quadrature(double x, int k, double height_scale, double step_scale) {
    if (!(x > 0.0)) throw DomainError("weight_v: x must be positive");
    if (k < 12 || k % 2 != 0) throw DomainError("weight_v: k must be even and >= 12");
    if (k > kMaxWeightV) throw DomainError("weight_v: k above 400 is outside the calibrated quadrature range");
    const double c = v_line(x, k);
    const double half = k / 2.0;
    const double height = height_scale * std::max(80.0, 12.0 * std::sqrt(c + half));
    const double step = step_scale * 0.01;
    const double lg = std::lgamma(half);
    const double lx = std::log(2.0 * pi * x);
    auto integrand = [&](double y) {
        const std::complex<double> s{c, y};
        return std::exp(special::lgamma(s + half) - lg - s * lx) / s;
    };
    // crossing the pole at s = 0 picks up its residue 1
    return (c < 0.0 ? 1.0 : 0.0) + special::vertical_line_integral(integrand, height, step);
}

double weight_v(double x, int k) { return weight_v_quadrature(x, k, 1.0, 1.0); }

std::vector<std::int64_t> hecke_expand(std::int64_t m, std::int64_t n) {
    if (m < 1 || n < 1) throw DomainError("hecke_expand: m and n must be positive");
    const std::int64_t mn = arith::checked_mul(m, n);
    std::vector<std::int64_t> out;
    for (const std::int64_t d : arith::divisors(arith::gcd(m, n))) out.push_back(mn / (d * d));
    std::sort(out.begin(), out.end());
    return out;
}

ModformDiagonal m2_modform_diagonal(const CoefficientTable& table, int k) {
    if (k < 12 || k % 2 != 0) throw DomainError("m2_modform_diagonal: k must be even and >= 12");
    const auto e = table.entries();
    std::vector<double> scaled(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) scaled[i] = e[i].r / std::sqrt(static_cast<double>(e[i].n));
    auto partial = parallel::map_blocks<CompensatedSum>(e.size(), 256, [&](std::size_t lo, std::size_t hi) {
        CompensatedSum acc;
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = 0; j < e.size(); ++j)
                acc += scaled[i] * scaled[j] * static_cast<double>(arith::sigma_gcd(e[i].n, e[j].n));
        return acc;
    });
    CompensatedSum total;
    for (const auto& p : partial) total += p;

    ModformDiagonal res;
    res.sum_exact = total.value();
    double log_prod = 0.0;
    for (const auto& pv : table.prime_values()) {
        const double p = static_cast<double>(pv.p);
        const double factor = 1.0 + pv.r * pv.r * (1.0 + 1.0 / p) + 2.0 * pv.r / std::sqrt(p);
        if (!(factor > 0.0))
            throw DomainError("m2_modform_diagonal: Euler factor not positive at p = " + std::to_string(pv.p));
        log_prod += std::log(factor);
    }
    res.euler_approx = std::exp(log_prod);
    res.ratio = res.sum_exact / res.euler_approx;
    res.admissible = static_cast<double>(table.support_bound()) <= std::sqrt(static_cast<double>(k)) / 100.0;
    return res;
}

} // namespace resonance
