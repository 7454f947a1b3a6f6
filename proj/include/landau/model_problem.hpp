#pragma once

// Scalar model problem  d_t u + nu u = v(t, x)  with a separable Gaussian
// source. Its causal solution has a closed form through erf, which makes it
// a fully analytic check of the limiting absorption machinery.

#include <algorithm>
#include <cmath>
#include <string>

#include "landau/errors.hpp"
#include "landau/kinetics.hpp"
#include "landau/quadrature.hpp"
#include "landau/special.hpp"

namespace landau {

/// v(t, x) = amplitude exp(-((t - t0)/tau)^2) exp(-((x - x0)/ell)^2).
struct ScalarSource {
    double amplitude = 1.0;
    double t0 = 0.0;
    double x0 = 0.0;
    double tau = 1.0;
    double ell = 1.0;

    void validate() const {
        if (!std::isfinite(amplitude) || !std::isfinite(t0) || !std::isfinite(x0))
            throw InvalidParameter("scalar source: amplitude and centre must be finite");
        if (!(tau > 0.0) || !(ell > 0.0)) throw InvalidParameter("scalar source: widths must be positive");
    }

    double time_factor(double t) const {
        const double s = (t - t0) / tau;
        return std::exp(-s * s);
    }
    double space_factor(double x) const {
        const double s = (x - x0) / ell;
        return std::exp(-s * s);
    }
    double operator()(double t, double x) const { return amplitude * time_factor(t) * space_factor(x); }

    /// int v(s, x) ds over the real line, per unit space factor.
    double time_mass() const { return amplitude * tau * std::sqrt(pi); }
};

/// int_{-inf}^t exp(-nu (t - s)) exp(-((s - t0)/tau)^2) ds.
///
/// With T = t - t0 and z = T/tau - nu tau/2 the integral is
///   tau exp(-nu T + nu^2 tau^2/4) (sqrt(pi)/2) erfc(-z);
/// for z < 0 it is rewritten as tau (sqrt(pi)/2) exp(-T^2/tau^2) erfcx(-z),
/// which neither overflows nor cancels.
inline double gaussian_primitive(double nu, double t, double t0, double tau) {
    const double T = t - t0;
    const double z = T / tau - 0.5 * nu * tau;
    const double half_sqrt_pi = 0.5 * std::sqrt(pi);
    if (z < 0.0) return tau * half_sqrt_pi * std::exp(-(T * T) / (tau * tau)) * erfcx(-z);
    return tau * half_sqrt_pi * std::exp(-nu * T + 0.25 * nu * nu * tau * tau) * std::erfc(-z);
}

/// Causal solution u^nu (nu > 0) or u (nu = 0) at (t, x), closed form.
inline double causal_u(const ScalarSource& src, double nu, double t, double x) {
    src.validate();
    if (!(nu >= 0.0)) throw InvalidParameter("causal_u requires nu >= 0");
    if (src.amplitude == 0.0) return 0.0;
    return src.amplitude * src.space_factor(x) * gaussian_primitive(nu, t, src.t0, src.tau);
}

/// The same integral by adaptive quadrature from t0 - 40 tau (the source is
/// below 1e-690 there). Used to cross-check the closed form.
inline double causal_u_quadrature(const ScalarSource& src, double nu, double t, double x,
                                  const quad::Tolerance& tol = {1e-15, 1e-13, 4000}) {
    src.validate();
    if (!(nu >= 0.0)) throw InvalidParameter("causal_u requires nu >= 0");
    const double lower = src.t0 - 40.0 * src.tau;
    if (t <= lower || src.amplitude == 0.0) return 0.0;
    auto f = [&](double s) { return std::exp(-nu * (t - s)) * src.time_factor(s); };
    const double cuts[] = {src.t0};
    const double integral = quad::integrate_or_throw(f, lower, t, cuts, tol, "causal_u quadrature did not converge");
    return src.amplitude * src.space_factor(x) * integral;
}

struct FourierIdentityResult {
    double deviation = 0.0;    // max |u^ - i v^/(omega + i nu)| / max |i v^/(omega + i nu)|
    int modes_compared = 0;
    double edge_ratio = 0.0;   // boundary magnitude of u and v relative to their maxima
    bool truncation_warning = false;
};

/// Compare the sampled transform of u^nu with i v^/(omega + i nu) on every
/// mode where |v^| exceeds noise_floor * max |v^|. Deviations are measured
/// against the largest predicted mode: at modes far below the peak both sides
/// are dominated by the window's wrap-around error.
inline FourierIdentityResult fourier_identity_check(const ScalarSource& src, double nu, const SpaceTimeGrid& grid,
                                                    double noise_floor = 1e-10) {
    src.validate();
    grid.validate();
    if (!(nu > 0.0)) throw InvalidParameter("fourier_identity_check requires nu > 0");
    FourierIdentityResult out;
    if (src.amplitude == 0.0) return out;

    Array2D<double> u(grid.n_t, grid.n_x), v(grid.n_t, grid.n_x);
    for (int a = 0; a < grid.n_t; ++a)
        for (int b = 0; b < grid.n_x; ++b) {
            u(a, b) = causal_u(src, nu, grid.t(a), grid.x(b));
            v(a, b) = src(grid.t(a), grid.x(b));
        }

    auto edge = [](const Array2D<double>& a) {
        double peak = 0.0, rim = 0.0;
        for (int m = 0; m < a.n0; ++m)
            for (int n = 0; n < a.n1; ++n) {
                const double val = std::abs(a(m, n));
                peak = std::max(peak, val);
                if (m == 0 || n == 0 || m == a.n0 - 1 || n == a.n1 - 1) rim = std::max(rim, val);
            }
        return peak > 0.0 ? rim / peak : 0.0;
    };
    out.edge_ratio = std::max(edge(u), edge(v));
    out.truncation_warning = out.edge_ratio > 1e-6;

    const Array2D<complex> u_hat = sampled_spectrum(u, grid);
    const Array2D<complex> v_hat = sampled_spectrum(v, grid);
    const SpectralGrid spectral(grid);
    double v_peak = 0.0;
    for (const auto& c : v_hat.data) v_peak = std::max(v_peak, std::abs(c));

    double scale = 0.0, worst = 0.0;
    for (int m = 0; m < grid.n_t; ++m) {
        const complex denom(spectral.omega(m), nu);
        for (int n = 0; n < grid.n_x; ++n) {
            const complex rhs = complex(0.0, 1.0) * v_hat(m, n) / denom;
            scale = std::max(scale, std::abs(rhs));
            if (std::abs(v_hat(m, n)) <= noise_floor * v_peak) continue;
            worst = std::max(worst, std::abs(u_hat(m, n) - rhs));
            ++out.modes_compared;
        }
    }
    out.deviation = scale > 0.0 ? worst / scale : 0.0;
    return out;
}

struct UniquenessReport {
    double nu = 0.0;
    double horizon = 0.0;          // T
    double delta = 0.0;
    double difference_at_zero = 0.0;
    double difference_at_minus_T = 0.0;
    double growth_factor = 0.0;    // difference(-T) / difference(0)
    double expected_growth = 0.0;  // exp(nu T)
    double relative_error = 0.0;
    // The same difference from integrating the Cauchy problem backward
    // from the perturbed datum u^nu(0, x) + delta by quadrature.
    double evolved_difference = 0.0;
    double evolved_relative_error = 0.0;
};

/// Two solutions of d_t u + nu u = v that differ at t = 0 by delta differ by
/// delta exp(-nu t) for all t: only the causal one stays tempered as t -> -inf.
inline UniquenessReport uniqueness_probe(const ScalarSource& src, double nu, double delta, double horizon,
                                         double x = 0.0) {
    src.validate();
    if (!(nu > 0.0)) throw InvalidParameter("uniqueness_probe requires nu > 0");
    if (!(horizon > 0.0)) throw InvalidParameter("uniqueness_probe requires a positive horizon");
    UniquenessReport r;
    r.nu = nu;
    r.horizon = horizon;
    r.delta = delta;
    r.expected_growth = std::exp(nu * horizon);
    auto difference = [&](double t) { return std::abs(delta * std::exp(-nu * t)); };
    r.difference_at_zero = difference(0.0);
    r.difference_at_minus_T = difference(-horizon);
    r.growth_factor = r.difference_at_zero > 0.0 ? r.difference_at_minus_T / r.difference_at_zero : 0.0;
    r.relative_error = r.difference_at_zero > 0.0 ? std::abs(r.growth_factor / r.expected_growth - 1.0) : 0.0;

    // u(t) = exp(-nu t) [ u(0) - int_t^0 exp(nu s) v(s) ds ] for t < 0
    const double u0 = causal_u(src, nu, 0.0, x);
    const double t = -horizon;
    auto f = [&](double s) { return std::exp(nu * s) * src(s, x); };
    const double cuts[] = {std::clamp(src.t0, t, 0.0)};
    const double backward = quad::integrate_or_throw(f, t, 0.0, cuts, {1e-16, 1e-13, 4000},
                                                     "backward evolution did not converge");
    const double perturbed = std::exp(-nu * t) * (u0 + delta - backward);
    r.evolved_difference = std::abs(perturbed - causal_u(src, nu, t, x));
    r.evolved_relative_error =
        r.difference_at_minus_T > 0.0 ? std::abs(r.evolved_difference / r.difference_at_minus_T - 1.0)
                                      : r.evolved_difference;
    return r;
}

} // namespace landau
