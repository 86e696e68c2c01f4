#include <cwl/expsum.hpp>

#include <cmath>
#include <limits>

#include <cwl/errors.hpp>

namespace cwl {

ScaledExpSum scaled_exp_sum(
    const std::vector<std::pair<std::complex<double>, std::complex<double>>>& terms) {
    ScaledExpSum out;
    if (terms.empty()) return out;
    double shift = -std::numeric_limits<double>::infinity();
    for (const auto& [c, e] : terms) {
        if (std::abs(c) > 0.0) shift = std::max(shift, e.real());
    }
    if (!std::isfinite(shift)) return out;  // all coefficients zero
    std::complex<double> sum{0.0, 0.0};
    for (const auto& [c, e] : terms) {
        sum += c * std::exp(e - shift);  // |exp(e - shift)| <= 1
    }
    out.residual = sum;
    out.shift = shift;
    return out;
}

std::complex<double> scaled_ratio(const ScaledExpSum& num, const ScaledExpSum& den) {
    if (den.residual == std::complex<double>(0.0, 0.0)) {
        throw OverflowGuard("scaled denominator vanished; value not representable");
    }
    if (num.residual == std::complex<double>(0.0, 0.0)) return {0.0, 0.0};
    const double log_mag = std::log(std::abs(num.residual)) -
                           std::log(std::abs(den.residual)) + (num.shift - den.shift);
    if (log_mag > 709.0) {
        throw OverflowGuard("result magnitude exceeds exp(709)");
    }
    const std::complex<double> phase = (num.residual / std::abs(num.residual)) /
                                       (den.residual / std::abs(den.residual));
    return phase * std::exp(log_mag);
}

}  // namespace cwl
