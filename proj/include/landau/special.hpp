#pragma once

#include <cmath>
#include <numbers>

namespace landau {

/// Dawson's integral D(x) = exp(-x^2) * int_0^x exp(s^2) ds.
///
/// |x| <= 6 uses exp(-x^2) * sum x^(2n+1) / (n! (2n+1)), whose terms are all
/// positive, so no cancellation. Beyond that the asymptotic series
/// 1/(2x) sum (2n-1)!!/(2x^2)^n is summed up to its smallest term; the
/// truncation error there is below exp(-36).
inline double dawson(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-8) return x;
    if (ax <= 6.0) {
        const double x2 = x * x;
        double term = ax; // x^(2n+1) / n!
        double sum = ax;
        for (int n = 1; n < 400; ++n) {
            term *= x2 / n;
            const double add = term / (2 * n + 1);
            sum += add;
            if (add < 1e-17 * sum) break;
        }
        return std::copysign(std::exp(-x2) * sum, x);
    }
    const double inv = 1.0 / (2.0 * ax * ax);
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n < 200; ++n) {
        const double next = term * (2 * n - 1) * inv;
        if (next > term || next < 1e-17) break;
        term = next;
        sum += term;
    }
    return std::copysign(sum / (2.0 * ax), x);
}

/// Scaled complementary error function exp(y^2) erfc(y).
inline double erfcx(double y) {
    if (y < 0.0) return 2.0 * std::exp(y * y) - erfcx(-y);
    if (y < 4.0) return std::exp(y * y) * std::erfc(y);
    // Laplace continued fraction, evaluated bottom-up.
    double k = y;
    for (int n = 80; n >= 1; --n) k = y + 0.5 * n / k;
    return 1.0 / (std::sqrt(std::numbers::pi) * k);
}

} // namespace landau
