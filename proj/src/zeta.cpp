#include "resonance/zeta.hpp"

#include "resonance/error.hpp"
#include "resonance/parallel.hpp"
#include "resonance/summation.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>

namespace resonance {

using std::numbers::pi;

std::string_view to_string(ZetaMethod m) {
    return m == ZetaMethod::riemann_siegel ? "riemann-siegel" : "euler-maclaurin";
}

namespace {

void check_height(double t) {
    if (!std::isfinite(t) || std::fabs(t) > kMaxZetaHeight)
        throw PrecisionError("zeta: |t| beyond 1e9 exceeds the double-precision budget");
}

} // namespace

ZetaPoint zeta_half_em(double t, int terms) {
    if (terms < 10) throw DomainError("zeta_half_em: terms must be >= 10");
    check_height(t);
    if (t < 0.0) {
        auto p = zeta_half_em(-t, terms);
        p.t = t;
        p.value = std::conj(p.value);
        return p;
    }

    const std::complex<double> s{0.5, t};
    CompensatedSum re, im;
    for (int n = 1; n < terms; ++n) {
        const double ln = std::log(static_cast<double>(n));
        const double mag = 1.0 / std::sqrt(static_cast<double>(n));
        re += mag * std::cos(t * ln);
        im += -mag * std::sin(t * ln);
    }
    const double N = terms;
    const double lnN = std::log(N);
    const std::complex<double> N_pow_minus_s = std::polar(1.0 / std::sqrt(N), -t * lnN);

    std::complex<double> tail = N_pow_minus_s * N / (s - 1.0) + 0.5 * N_pow_minus_s;
    // B_2k / (2k)!
    static constexpr std::array<double, 5> bern = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0,
                                                   1.0 / 47900160.0};
    std::complex<double> rising = s; // s (s+1) ... (s+2j-2)
    std::complex<double> power = N_pow_minus_s / N; // N^{-s-1}
    double est = 0.0;
    for (int j = 0; j < 5; ++j) {
        const std::complex<double> term = bern[static_cast<std::size_t>(j)] * rising * power;
        if (j < 4)
            tail += term;
        else
            est = std::abs(term);
        rising *= (s + static_cast<double>(2 * j + 1)) * (s + static_cast<double>(2 * j + 2));
        power /= N * N;
    }

    ZetaPoint p;
    p.t = t;
    p.value = std::complex<double>(re.value(), im.value()) + tail;
    p.method = ZetaMethod::euler_maclaurin;
    p.est_error = est + 1e-16 * 2.0 * std::sqrt(N);
    return p;
}

ZetaPoint zeta_half_em(double t) {
    const double at = std::fabs(t);
    const int terms = static_cast<int>(std::max(64.0, std::ceil(at) + 32.0));
    return zeta_half_em(t, terms);
}

double riemann_siegel_theta(double t) {
    if (t < 10.0) throw DomainError("riemann_siegel_theta: asymptotic series needs t >= 10");
    const double inv = 1.0 / t;
    const double inv2 = inv * inv;
    return 0.5 * t * std::log(t / (2.0 * pi)) - 0.5 * t - pi / 8.0 +
           inv * (1.0 / 48.0 + inv2 * (7.0 / 5760.0 + inv2 * (31.0 / 80640.0 + inv2 * 127.0 / 430080.0)));
}

namespace {

// Taylor coefficients in x = p - 1/2 of the Riemann-Siegel remainder
// functions. Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p) is entire; its
// coefficients come from a Cauchy integral on |x| = 1, since dividing the two
// cosine series term by term is unstable.
class RemainderSeries {
public:
    static constexpr int kDegree = 110;
    using Poly = std::array<long double, kDegree + 1>;

    RemainderSeries() {
        using cld = std::complex<long double>;
        constexpr int M = 256;
        const long double tau = 2.0L * std::numbers::pi_v<long double>;
        const long double shift = 5.0L * std::numbers::pi_v<long double> / 8.0L;
        std::array<cld, M> samples;
        for (int j = 0; j < M; ++j) {
            const cld z = std::polar(1.0L, tau * j / M);
            samples[static_cast<std::size_t>(j)] = -std::cos(tau * z * z - shift) / std::cos(tau * z);
        }
        Poly psi{};
        for (int n = 0; n <= kDegree; ++n) {
            cld acc{0.0L, 0.0L};
            for (int j = 0; j < M; ++j)
                acc += samples[static_cast<std::size_t>(j)] * std::polar(1.0L, -tau * ((static_cast<long>(j) * n) % M) / M);
            psi[static_cast<std::size_t>(n)] = acc.real() / M;
        }

        const long double p2 = std::numbers::pi_v<long double> * std::numbers::pi_v<long double>;
        const long double p4 = p2 * p2, p6 = p4 * p2, p8 = p4 * p4;
        auto d = [&](int k) { return derivative(psi, k); };
        coeff_[0] = psi;
        coeff_[1] = combine({{-1.0L / (96.0L * p2), d(3)}});
        coeff_[2] = combine({{1.0L / (64.0L * p2), d(2)}, {1.0L / (18432.0L * p4), d(6)}});
        coeff_[3] = combine({{-1.0L / (64.0L * p2), d(1)},
                             {-1.0L / (3840.0L * p4), d(5)},
                             {-1.0L / (5308416.0L * p6), d(9)}});
        coeff_[4] = combine({{1.0L / (128.0L * p2), psi},
                             {19.0L / (24576.0L * p4), d(4)},
                             {11.0L / (5898240.0L * p6), d(8)},
                             {1.0L / (2038431744.0L * p8), d(12)}});

        for (int i = 0; i <= 1000; ++i) max_c4_ = std::max(max_c4_, std::fabs(eval(4, i / 1000.0)));
    }

    double eval(int k, double p) const {
        const long double x = static_cast<long double>(p) - 0.5L;
        const Poly& c = coeff_[static_cast<std::size_t>(k)];
        long double acc = 0.0L;
        for (int n = kDegree - 12; n >= 0; --n) acc = acc * x + c[static_cast<std::size_t>(n)];
        return static_cast<double>(acc);
    }

    double max_c4() const { return max_c4_; }

private:
    static Poly derivative(const Poly& p, int order) {
        Poly out{};
        for (int n = order; n <= kDegree; ++n) {
            long double f = 1.0L;
            for (int j = 0; j < order; ++j) f *= static_cast<long double>(n - j);
            out[static_cast<std::size_t>(n - order)] = p[static_cast<std::size_t>(n)] * f;
        }
        return out;
    }

    static Poly combine(std::initializer_list<std::pair<long double, Poly>> parts) {
        Poly out{};
        for (const auto& [w, p] : parts)
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * p[i];
        return out;
    }

    std::array<Poly, 5> coeff_{};
    double max_c4_ = 0.0;
};

const RemainderSeries& remainder_series() {
    static const RemainderSeries series;
    return series;
}

} // namespace

double riemann_siegel_coefficient(int k, double p) {
    if (k < 0 || k > 4) throw DomainError("riemann_siegel_coefficient: k must be in 0..4");
    return remainder_series().eval(k, p);
}

ZetaPoint zeta_half_rs(double t) {
    check_height(t);
    if (t < 0.0) {
        auto p = zeta_half_rs(-t);
        p.t = t;
        p.value = std::conj(p.value);
        return p;
    }
    if (t < kRiemannSiegelFloor)
        throw DomainError("zeta_half_rs: t below 30; use zeta_half_em");

    const double tau = t / (2.0 * pi);
    const double root = std::sqrt(tau);
    const auto m = static_cast<long>(std::floor(root));
    const double frac = root - static_cast<double>(m);
    const double theta = riemann_siegel_theta(t);

    CompensatedSum main;
    for (long n = 1; n <= m; ++n) {
        const double nd = static_cast<double>(n);
        main += std::cos(theta - t * std::log(nd)) / std::sqrt(nd);
    }

    const auto& series = remainder_series();
    const double scale = 1.0 / root; // (t/2pi)^{-1/2}
    double correction = 0.0;
    double power = 1.0;
    for (int k = 0; k <= 4; ++k) {
        correction += series.eval(k, frac) * power;
        power *= scale;
    }
    const double sign = (m - 1) % 2 == 0 ? 1.0 : -1.0;
    const double quarter = std::pow(tau, -0.25);
    const double z = 2.0 * main.value() + sign * quarter * correction;

    ZetaPoint p;
    p.t = t;
    p.value = std::polar(1.0, -theta) * z;
    p.method = ZetaMethod::riemann_siegel;
    p.est_error = quarter * series.max_c4() * power + 1e-15 * static_cast<double>(m);
    return p;
}

ZetaPoint zeta_half(double t) {
    return std::fabs(t) >= kRiemannSiegelFloor ? zeta_half_rs(t) : zeta_half_em(t);
}

DirichletPolynomial::DirichletPolynomial(const CoefficientTable& table) {
    coeff_.reserve(table.size());
    log_n_.reserve(table.size());
    for (const auto& e : table.entries()) {
        coeff_.push_back(e.r);
        log_n_.push_back(std::log(static_cast<double>(e.n)));
    }
}

std::complex<double> DirichletPolynomial::operator()(double t) const {
    CompensatedSum re, im;
    for (std::size_t i = 0; i < coeff_.size(); ++i) {
        const double a = t * log_n_[i];
        re += coeff_[i] * std::cos(a);
        im += -coeff_[i] * std::sin(a);
    }
    return {re.value(), im.value()};
}

std::vector<std::complex<double>> DirichletPolynomial::values_grid(double t0, double h, std::size_t count) const {
    constexpr std::size_t kRestart = 4096;
    std::vector<std::complex<double>> out(count);
    const std::size_t chunks = (count + kRestart - 1) / kRestart;
    parallel::for_chunks(chunks, [&](std::size_t c) {
        const std::size_t lo = c * kRestart;
        const std::size_t hi = std::min(count, lo + kRestart);
        const double t_start = t0 + static_cast<double>(lo) * h;
        std::vector<std::complex<double>> phase(coeff_.size()), step(coeff_.size());
        for (std::size_t i = 0; i < coeff_.size(); ++i) {
            phase[i] = coeff_[i] * std::polar(1.0, -t_start * log_n_[i]);
            step[i] = std::polar(1.0, -h * log_n_[i]);
        }
        for (std::size_t j = lo; j < hi; ++j) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t i = 0; i < phase.size(); ++i) {
                acc += phase[i];
                phase[i] *= step[i];
            }
            out[j] = acc;
        }
    });
    return out;
}

std::vector<double> DirichletPolynomial::squared_magnitude_grid(double t0, double h, std::size_t count) const {
    const auto values = values_grid(t0, h, count);
    std::vector<double> out(count);
    for (std::size_t j = 0; j < count; ++j) out[j] = std::norm(values[j]);
    return out;
}

double DirichletPolynomial::l1_norm() const {
    CompensatedSum acc;
    for (double c : coeff_) acc += std::fabs(c);
    return acc.value();
}

std::int64_t DirichletPolynomial::max_n() const {
    return log_n_.empty() ? 0 : static_cast<std::int64_t>(std::llround(std::exp(log_n_.back())));
}

std::complex<double> dirichlet_poly_eval(const CoefficientTable& table, double t) {
    return DirichletPolynomial(table)(t);
}

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double phi(double t) {
    if (t <= 1.0 || t >= 2.0) return 0.0;
    if (t < 1.25) return smooth_step(4.0 * (t - 1.0));
    if (t <= 1.75) return 1.0;
    return smooth_step(4.0 * (2.0 - t));
}

namespace {

// phi is symmetric about 3/2, so phi_hat(y) = exp(-3iy/2) G(y) with
// G(y) = 2 int_0^{1/2} phi(3/2 + u) cos(u y) du real.
double phi_hat_envelope(double y, double tol) {
    const double flat = std::fabs(y) < 1e-8 ? 0.25 - y * y / 384.0 : std::sin(0.25 * y) / y;
    // ramp: u = (1 + v)/4 for v in [0, 1], phi(3/2 + u) = step(1 - v)
    auto f = [y](double v) { return smooth_step(1.0 - v) * std::cos(0.25 * (1.0 + v) * y); };
    // the rule's tolerance is relative; lifting the integrand by 1 turns it
    // into an absolute one, which is what matters once phi_hat is tiny
    auto lifted = [&f](double v) { return 1.0 + f(v); };
    double err = 0.0;
    const double ramp =
        0.25 * (boost::math::quadrature::gauss_kronrod<double, 31>::integrate(lifted, 0.0, 1.0, 15, tol, &err) - 1.0);
    return 2.0 * (flat + ramp);
}

} // namespace

std::complex<double> phi_hat_direct(double y, double tol) {
    return std::polar(1.0, -1.5 * y) * phi_hat_envelope(y, tol);
}

struct SmoothWindow::Impl {
    static constexpr std::size_t kBlock = 64;
    std::size_t nodes = static_cast<std::size_t>(kGridMax / kGridStep) + 4;
    std::vector<double> envelope;
    std::vector<std::uint8_t> ready;
    std::mutex mutex;

    Impl() : envelope(nodes, 0.0), ready((nodes + kBlock - 1) / kBlock, 0) {}

    void ensure_block(std::size_t b) {
        std::lock_guard lock(mutex);
        if (ready[b]) return;
        const std::size_t hi = std::min(nodes, (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < hi; ++i)
            envelope[i] = phi_hat_envelope(static_cast<double>(i) * kGridStep, 1e-13);
        ready[b] = 1;
    }

    double node(std::size_t i) {
        ensure_block(i / kBlock);
        return envelope[i];
    }
};

SmoothWindow::SmoothWindow() : impl_(std::make_unique<Impl>()) {}
SmoothWindow::~SmoothWindow() = default;

SmoothWindow& SmoothWindow::instance() {
    static SmoothWindow window;
    return window;
}

std::complex<double> SmoothWindow::phi_hat(double y) {
    const double ay = std::fabs(y);
    if (ay > kGridMax) return phi_hat_direct(y);
    // cubic Lagrange on the four surrounding nodes; G is even, so mirror at 0
    const double pos = ay / kGridStep;
    const auto base = static_cast<long>(std::floor(pos));
    const double u = pos - static_cast<double>(base);
    double g = 0.0;
    const double w[4] = {-u * (u - 1.0) * (u - 2.0) / 6.0, (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0,
                         -(u + 1.0) * u * (u - 2.0) / 2.0, (u + 1.0) * u * (u - 1.0) / 6.0};
    for (int j = 0; j < 4; ++j) {
        const long idx = std::labs(base - 1 + j);
        g += w[j] * impl_->node(static_cast<std::size_t>(idx));
    }
    return std::polar(1.0, -1.5 * y) * g;
}

void SmoothWindow::save_cache(std::ostream& out) {
    std::lock_guard lock(impl_->mutex);
    out << "# phihat.cache v1 step=" << format_double(kGridStep) << "\n";
    for (std::size_t b = 0; b < impl_->ready.size(); ++b) {
        if (!impl_->ready[b]) continue;
        const std::size_t hi = std::min(impl_->nodes, (b + 1) * Impl::kBlock);
        for (std::size_t i = b * Impl::kBlock; i < hi; ++i) {
            const double y = static_cast<double>(i) * kGridStep;
            const auto v = std::polar(1.0, -1.5 * y) * impl_->envelope[i];
            out << format_double(y) << " " << format_double(v.real()) << " " << format_double(v.imag()) << "\n";
        }
    }
}

std::size_t SmoothWindow::load_cache(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header != "# phihat.cache v1 step=" + format_double(kGridStep)) return 0;
    std::vector<double> values(impl_->nodes, 0.0);
    std::vector<std::uint8_t> seen(impl_->nodes, 0);
    double y = 0.0, re = 0.0, im = 0.0;
    while (in >> y >> re >> im) {
        const double pos = y / kGridStep;
        const auto i = static_cast<std::size_t>(std::llround(pos));
        if (i >= impl_->nodes || std::fabs(pos - static_cast<double>(i)) > 1e-9) continue;
        // undo the phase; the envelope is real
        values[i] = (std::polar(1.0, 1.5 * y) * std::complex<double>(re, im)).real();
        seen[i] = 1;
    }
    std::lock_guard lock(impl_->mutex);
    std::size_t loaded = 0;
    for (std::size_t b = 0; b < impl_->ready.size(); ++b) {
        const std::size_t lo = b * Impl::kBlock, hi = std::min(impl_->nodes, lo + Impl::kBlock);
        bool complete = true;
        for (std::size_t i = lo; i < hi; ++i) complete = complete && seen[i];
        if (!complete || impl_->ready[b]) continue;
        for (std::size_t i = lo; i < hi; ++i) impl_->envelope[i] = values[i];
        impl_->ready[b] = 1;
        loaded += hi - lo;
    }
    return loaded;
}

MomentReport moments(const CoefficientTable& table, double T, double grid_step) {
    if (!(T > 0.0)) throw DomainError("moments: T must be positive");
    const std::int64_t N = table.support_bound();
    if (static_cast<double>(N) > std::pow(T, 0.9))
        throw DomainError("moments: N exceeds T^0.9");
    if (!(grid_step > 0.0) || grid_step > 0.05) throw DomainError("moments: grid_step must be in (0, 0.05]");

    double h = grid_step;
    if (N >= 2) h = std::min(h, pi / (10.0 * std::log(static_cast<double>(N))));
    const auto M = static_cast<std::size_t>(std::ceil(T / h));
    h = T / static_cast<double>(M);

    const DirichletPolynomial poly(table);
    const auto r2 = poly.squared_magnitude_grid(T, h, M + 1);

    constexpr std::size_t kBlock = 4096;
    struct Partial {
        CompensatedSum m1, m1_even;
        CompensatedComplexSum m2, m2_even;
    };
    auto partials = parallel::map_blocks<Partial>(M + 1, kBlock, [&](std::size_t lo, std::size_t hi) {
        Partial acc;
        for (std::size_t j = lo; j < hi; ++j) {
            const double t = T + static_cast<double>(j) * h;
            const double w = phi(t / T);
            if (w == 0.0) continue;
            const double a = r2[j] * w;
            const std::complex<double> b = zeta_half(t).value * a;
            acc.m1 += a;
            acc.m2 += b;
            if (j % 2 == 0) {
                acc.m1_even += a;
                acc.m2_even += b;
            }
        }
        return acc;
    });
    Partial total;
    for (const auto& p : partials) {
        total.m1 += p.m1;
        total.m1_even += p.m1_even;
        total.m2 += p.m2;
        total.m2_even += p.m2_even;
    }

    MomentReport rep;
    rep.T = T;
    rep.N = N;
    rep.step = h;
    rep.m1_direct = h * total.m1.value();
    rep.m2_direct = h * total.m2.value();
    const double m1_coarse = 2.0 * h * total.m1_even.value();
    const std::complex<double> m2_coarse = 2.0 * h * total.m2_even.value();
    rep.quadrature_error = std::max(std::fabs(rep.m1_direct - m1_coarse), std::abs(rep.m2_direct - m2_coarse));
    const double scale = T * SmoothWindow::instance().phi_hat0();
    rep.m1_diag = scale * denominator_exact(table);
    rep.m2_diag = scale * numerator_exact(table);
    if (rep.quadrature_error > 1e-3 * (std::fabs(rep.m1_direct) + std::abs(rep.m2_direct)))
        throw IterationError("moments: trapezoid rule did not settle between step h and 2h");
    return rep;
}

double zeta_mean_square(double T, double grid_step) {
    if (!(T >= 30.0)) throw DomainError("zeta_mean_square: T must be >= 30");
    if (!(grid_step > 0.0) || grid_step > 0.05) throw DomainError("zeta_mean_square: grid_step must be in (0, 0.05]");
    if (T / grid_step > 2147483648.0) throw ResourceError("zeta_mean_square: grid would exceed 2^31 points");
    const auto M = static_cast<std::size_t>(std::ceil(T / grid_step));
    const double h = T / static_cast<double>(M);
    auto partials = parallel::map_blocks<CompensatedSum>(M + 1, 4096, [&](std::size_t lo, std::size_t hi) {
        CompensatedSum acc;
        for (std::size_t j = lo; j < hi; ++j) {
            const double w = (j == 0 || j == M) ? 0.5 : 1.0;
            acc += w * std::norm(zeta_half(T + static_cast<double>(j) * h).value);
        }
        return acc;
    });
    CompensatedSum total;
    for (const auto& p : partials) total += p;
    return h * total.value() / T;
}

} // namespace resonance
