#pragma once

#include <cmath>
#include <complex>

namespace resonance {

// Neumaier's variant of Kahan summation: the compensation also survives
// terms larger than the running sum.
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(double init) : sum_(init) {}

    CompensatedSum& operator+=(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
        return *this;
    }

    CompensatedSum& operator+=(const CompensatedSum& other) {
        *this += other.sum_;
        *this += other.comp_;
        return *this;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

class CompensatedComplexSum {
public:
    CompensatedComplexSum& operator+=(std::complex<double> z) {
        re_ += z.real();
        im_ += z.imag();
        return *this;
    }
    CompensatedComplexSum& operator+=(const CompensatedComplexSum& other) {
        re_ += other.re_;
        im_ += other.im_;
        return *this;
    }
    std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
    CompensatedSum re_;
    CompensatedSum im_;
};

} // namespace resonance
