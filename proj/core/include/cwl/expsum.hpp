#pragma once

#include <complex>
#include <utility>
#include <vector>

namespace cwl {

// A sum of c_i * exp(e_i) stored as residual * exp(shift), with shift the
// largest real part among the exponents. Every retained factor
// exp(e_i - shift) has modulus <= 1, so sums with huge exponents stay
// representable and the shifts cancel between a numerator and a denominator
// before any exp() is taken.
struct ScaledExpSum {
    std::complex<double> residual{0.0, 0.0};
    double shift = 0.0;  // value = residual * exp(shift)
};

// terms: (coefficient, exponent) pairs.
ScaledExpSum scaled_exp_sum(
    const std::vector<std::pair<std::complex<double>, std::complex<double>>>& terms);

// num / den with shift cancellation. Throws OverflowGuard when the final
// magnitude cannot be represented in double precision (or the denominator
// residual underflows to zero).
std::complex<double> scaled_ratio(const ScaledExpSum& num, const ScaledExpSum& den);

}  // namespace cwl
