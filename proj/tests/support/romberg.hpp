#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace testsupport {

// Romberg integration of f over [a, b]: trapezoid refinements accelerated by
// Richardson extrapolation. Plain trapezoid stalls near 1e-7 at feasible node
// counts; the extrapolated ladder reaches the 1e-10 tolerances the
// closed-form cross-checks need.
inline double romberg(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-11, int max_levels = 22) {
    std::array<double, 24> row{};
    std::array<double, 24> prev{};
    double h = b - a;
    prev[0] = 0.5 * h * (f(a) + f(b));
    long long n = 1;
    for (int level = 1; level <= max_levels; ++level) {
        double sum = 0.0;
        for (long long i = 0; i < n; ++i) {
            sum += f(a + (static_cast<double>(i) + 0.5) * h);
        }
        row[0] = 0.5 * prev[0] + 0.5 * h * sum;
        double factor = 4.0;
        for (int k = 1; k <= level; ++k) {
            row[k] = (factor * row[k - 1] - prev[k - 1]) / (factor - 1.0);
            factor *= 4.0;
        }
        if (level >= 4 &&
            std::abs(row[level] - prev[level - 1]) <=
                tol * (1.0 + std::abs(row[level]))) {
            return row[level];
        }
        prev = row;
        n *= 2;
        h *= 0.5;
    }
    throw std::runtime_error("romberg: no convergence within level budget");
}

}  // namespace testsupport
