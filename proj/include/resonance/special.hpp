#pragma once

#include <complex>
#include <functional>

namespace resonance::special {

/// log Gamma(z) for Re z > 0. The imaginary part is only defined modulo
/// 2 pi, which is all exp() needs.
std::complex<double> lgamma(std::complex<double> z);

/// psi(x) for x > 0.
double digamma(double x);

/// Trapezoid rule for (1/2 pi) * integral over y in [-height, height] of
/// integrand(y) along a vertical line, for integrands with conjugate
/// symmetry integrand(-y) = conj(integrand(y)). Returns the real result.
double vertical_line_integral(const std::function<std::complex<double>(double)>& integrand, double height,
                              double step);

} // namespace resonance::special
