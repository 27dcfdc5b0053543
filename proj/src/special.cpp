#include "resonance/special.hpp"

#include "resonance/error.hpp"
#include "resonance/summation.hpp"

#include <cmath>
#include <numbers>

namespace resonance::special {

std::complex<double> lgamma(std::complex<double> z) {
    if (!(z.real() > 0.0)) throw DomainError("lgamma: needs Re z > 0");
    // shift to Re z >= 15, where the Stirling tail is below 1e-17
    std::complex<double> shift_log{0.0, 0.0};
    std::complex<double> product{1.0, 0.0};
    int count = 0;
    while (z.real() < 15.0) {
        product *= z;
        z += 1.0;
        if (++count == 8) {
            shift_log += std::log(product);
            product = 1.0;
            count = 0;
        }
    }
    shift_log += std::log(product);

    const std::complex<double> inv = 1.0 / z;
    const std::complex<double> inv2 = inv * inv;
    // Bernoulli terms B_2k / (2k (2k-1)) for k = 1..7
    static constexpr double c[] = {1.0 / 12.0,  -1.0 / 360.0,       1.0 / 1260.0, -1.0 / 1680.0,
                                   1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0};
    std::complex<double> series = c[6];
    for (int k = 5; k >= 0; --k) series = c[k] + series * inv2;
    series *= inv;
    const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
    return (z - 0.5) * std::log(z) - z + half_log_2pi + series - shift_log;
}

double digamma(double x) {
    if (!(x > 0.0)) throw DomainError("digamma: needs x > 0");
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv2 = 1.0 / (x * x);
    return acc + std::log(x) - 0.5 / x -
           inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
}

double vertical_line_integral(const std::function<std::complex<double>(double)>& integrand, double height,
                              double step) {
    if (!(height > 0.0) || !(step > 0.0)) throw DomainError("vertical_line_integral: bad parameters");
    const auto n = static_cast<long>(std::ceil(height / step));
    const double h = height / static_cast<double>(n);
    CompensatedSum acc(0.5 * integrand(0.0).real());
    for (long j = 1; j < n; ++j) acc += integrand(static_cast<double>(j) * h).real();
    acc += 0.5 * integrand(height).real();
    // both halves of the line contribute the same real part
    return acc.value() * h / std::numbers::pi;
}

} // namespace resonance::special
