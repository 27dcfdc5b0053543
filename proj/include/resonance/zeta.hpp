#pragma once

#include "resonance/resonator.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

namespace resonance {

enum class ZetaMethod { euler_maclaurin, riemann_siegel };

std::string_view to_string(ZetaMethod m);

/// zeta(1/2 + it) with an error estimate.
struct ZetaPoint {
    double t = 0.0;
    std::complex<double> value;
    ZetaMethod method = ZetaMethod::euler_maclaurin;
    double est_error = 0.0;
};

inline constexpr double kMaxZetaHeight = 1e9;
inline constexpr double kRiemannSiegelFloor = 30.0;

/// Euler-Maclaurin with `terms` summands and Bernoulli corrections through
/// B_8; est_error is the size of the B_10 term.
ZetaPoint zeta_half_em(double t, int terms);

/// Euler-Maclaurin with enough terms for ~1e-9 accuracy at height t.
ZetaPoint zeta_half_em(double t);

/// Riemann-Siegel for t >= 30, with remainder corrections C0..C4.
ZetaPoint zeta_half_rs(double t);

/// Riemann-Siegel above the floor, Euler-Maclaurin below.
ZetaPoint zeta_half(double t);

/// Riemann-Siegel theta by its asymptotic series (t >= 10).
double riemann_siegel_theta(double t);

/// Riemann-Siegel remainder coefficient C_k(p), k = 0..4, p in [0, 1).
double riemann_siegel_coefficient(int k, double p);

/// R(t) = sum r(n) n^{-it} with precomputed logarithms.
class DirichletPolynomial {
public:
    explicit DirichletPolynomial(const CoefficientTable& table);

    std::complex<double> operator()(double t) const;

    /// |R(t0 + j h)|^2 for j in [0, count), using a rotation recurrence that
    /// restarts from exact phases every 4096 points.
    std::vector<double> squared_magnitude_grid(double t0, double h, std::size_t count) const;
    std::vector<std::complex<double>> values_grid(double t0, double h, std::size_t count) const;

    /// sum |r(n)|.
    double l1_norm() const;
    std::int64_t max_n() const;

private:
    std::vector<double> coeff_;
    std::vector<double> log_n_;
};

std::complex<double> dirichlet_poly_eval(const CoefficientTable& table, double t);

/// The fixed bump: smooth step up on [1, 5/4], 1 on [5/4, 7/4], smooth step
/// down on [7/4, 2], built from exp(-1/x).
double smooth_step(double x);
double phi(double t);

/// Fourier transform of phi by adaptive Gauss-Kronrod quadrature.
std::complex<double> phi_hat_direct(double y, double tol = 1e-12);

/// Lazily filled grid of phi-hat values on |y| <= 1e4 with cubic
/// interpolation. Grid blocks are computed on first touch.
class SmoothWindow {
public:
    static constexpr double kGridMax = 1e4;
    static constexpr double kGridStep = 1.0 / 64.0;

    static SmoothWindow& instance();

    std::complex<double> phi_hat(double y);
    double phi_hat0() const { return 0.75; }

    /// "y value_re value_im" lines for every computed grid node.
    void save_cache(std::ostream& out);
    /// Returns the number of nodes loaded; ignores files with another header.
    std::size_t load_cache(std::istream& in);

    SmoothWindow();
    ~SmoothWindow();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

inline std::complex<double> phi_hat(double y) { return SmoothWindow::instance().phi_hat(y); }

struct MomentReport {
    double m1_direct = 0.0;
    double m1_diag = 0.0;
    std::complex<double> m2_direct;
    double m2_diag = 0.0;
    double T = 0.0;
    std::int64_t N = 0;
    double quadrature_error = 0.0;
    double step = 0.0;
};

/// Smoothed moments of |R|^2 and zeta |R|^2 over [T, 2T] by trapezoid
/// quadrature, next to their diagonal predictions. Requires N <= T^0.9.
MomentReport moments(const CoefficientTable& table, double T, double grid_step);

/// (1/T) times the trapezoid integral of |zeta(1/2+it)|^2 over [T, 2T].
double zeta_mean_square(double T, double grid_step = 0.05);

} // namespace resonance
