#pragma once

// Hilbert transform H(phi)(x) = (1/pi) p.v. int phi(y) / (x - y) dy, computed
// through the symmetric-difference form
//
//     H(phi)(x) = (1/pi) int_{-inf}^inf [phi(x-u) - phi(x+u)] / (2u) du
//               = (1/pi) int_0^inf [phi(x-u) - phi(x+u)] / u du,
//
// whose integrand extends continuously to u = 0 (by -2 phi'(x)), so there is no
// principal value left to take.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <type_traits>
#include <vector>

#include "landau/errors.hpp"
#include "landau/fft.hpp"
#include "landau/kinetics.hpp"

namespace landau {

struct PvIntegrandSpec {
    double u_max = 64.0;
    int n_u = 8192;
    double singular_floor = 1e-7;

    void validate() const {
        if (!(u_max > 0.0)) throw InvalidParameter("pv spec: u_max must be positive");
        if (n_u < 2 || n_u % 2 != 0) throw InvalidParameter("pv spec: n_u must be even and >= 2");
        if (!(singular_floor > 0.0) || singular_floor > 1e-2 * u_max / n_u)
            throw InvalidParameter("pv spec: singular_floor must be positive and well below u_max/n_u");
    }

    /// Window wide enough to reach `extent` past the evaluation point, at a
    /// fixed node density per unit of u_max.
    static PvIntegrandSpec covering(double x, double extent, double nodes_per_unit = 128.0) {
        PvIntegrandSpec s;
        s.u_max = std::abs(x) + extent;
        const int n = static_cast<int>(std::ceil(nodes_per_unit * s.u_max / 2.0)) * 2;
        s.n_u = std::max(n, 512);
        s.singular_floor = std::min(1e-7, 1e-3 * s.u_max / s.n_u);
        return s;
    }
};

template <class T>
struct HilbertResult {
    T value{};
    bool truncation_warning = false;
    double edge_ratio = 0.0; // max |phi(x -+ u_max)| / max sampled |phi|
};

/// Composite Simpson in s on [0, 1] with u = u_max s^2, which packs nodes
/// near the removable singularity. Below singular_floor the integrand is
/// replaced by its even Taylor model h0 + h2 u^2.
template <class Phi>
auto hilbert(Phi&& phi, double x, const PvIntegrandSpec& spec) {
    using T = std::decay_t<decltype(phi(x))>;
    spec.validate();
    const double U = spec.u_max;
    double max_phi = 0.0;

    auto raw = [&](double u) {
        const T lo = phi(x - u);
        const T hi = phi(x + u);
        max_phi = std::max({max_phi, std::abs(lo), std::abs(hi)});
        return (lo - hi) / u;
    };
    const double d = spec.singular_floor;
    const T h_d = raw(d);
    const T h_2d = raw(2.0 * d);
    const T h2 = (h_2d - h_d) / (3.0 * d * d);
    const T h0 = h_d - h2 * d * d;
    auto h = [&](double u) { return u < d ? T(h0 + h2 * u * u) : raw(u); };

    const int n = spec.n_u;
    const double ds = 1.0 / n;
    T acc{}; // g(0) = 0
    for (int i = 1; i <= n; ++i) {
        const double s = i * ds;
        const double u = U * s * s;
        const T g = h(u) * (2.0 * U * s);
        acc += (i == n ? 1.0 : (i % 2 ? 4.0 : 2.0)) * g;
    }

    HilbertResult<T> out;
    out.value = acc * (ds / 3.0) / pi;
    const double edge = std::max(std::abs(phi(x - U)), std::abs(phi(x + U)));
    out.edge_ratio = max_phi > 0.0 ? edge / max_phi : 0.0;
    out.truncation_warning = out.edge_ratio > 1e-10;
    return out;
}

// ---------------------------------------------------------------------------
// Spectral checks of H on a sampled window.
//
// H(phi) decays only like (1/pi x) sum_n m_n / x^n with m_n the moments of
// phi, so a plain DFT over a finite window sees the cut tail. The leading four
// far-field orders are removed with rational functions whose transforms are
// known exactly; the DFT then only acts on an O(x^-5) remainder.

struct FarFieldModel {
    double a1 = 0.0, a2 = 0.0, b1 = 0.0, b2 = 0.0;

    /// Matches (1/pi)(m0/x + m1/x^2 + m2/x^3 + m3/x^4) at infinity.
    static FarFieldModel from_moments(std::span<const double, 4> m) {
        FarFieldModel f;
        f.a1 = m[0] / pi;
        f.a2 = (m[0] + m[2]) / pi;
        f.b1 = m[1] / pi;
        f.b2 = (m[1] + m[3]) / pi;
        return f;
    }

    double operator()(double x) const {
        const double r = 1.0 / (x * x + 1.0);
        return a1 * x * r + a2 * x * r * r + b1 * r + b2 * r * r;
    }

    /// Transform int T(x) exp(-i xi x) dx.
    complex transform(double xi) const {
        const double ax = std::abs(xi);
        const double e = std::exp(-ax);
        const double sg = (xi > 0.0) - (xi < 0.0);
        const complex odd = complex(0.0, -1.0) * (a1 * pi * sg * e + a2 * 0.5 * pi * xi * e);
        const double even = b1 * pi * e + b2 * 0.5 * pi * (1.0 + ax) * e;
        return odd + even;
    }
};

/// Moments m_0..m_3 of sampled phi by the trapezoid sum.
inline std::array<double, 4> sample_moments(std::span<const double> phi, double x_min, double dx) {
    std::array<double, 4> m{};
    for (std::size_t j = 0; j < phi.size(); ++j) {
        const double x = x_min + j * dx;
        double p = dx * phi[j];
        for (double& mk : m) {
            mk += p;
            p *= x;
        }
    }
    return m;
}

/// Continuous transform int f exp(-i xi x) dx approximated by the DFT of
/// samples on [x_min, x_min + n dx); returns values on xi_k = 2 pi k~ / (n dx).
inline std::vector<complex> window_transform(std::span<const double> f, double x_min, double dx) {
    const int n = static_cast<int>(f.size());
    std::vector<complex> out(f.begin(), f.end());
    fft::transform_1d(out, fft::Sign::forward);
    for (int k = 0; k < n; ++k) {
        const double xi = 2.0 * pi * fft::signed_index(k, n) / (n * dx);
        out[k] *= dx * std::polar(1.0, -xi * x_min);
    }
    return out;
}

struct HilbertSpectra {
    std::vector<double> xi;
    std::vector<complex> phi_hat;
    std::vector<complex> h_hat;
    std::vector<double> h_samples; // H(phi) at the n + 1 window nodes (both ends)
    std::array<double, 4> moments{};
    bool truncation_warning = false;
};

/// Sample phi and H(phi) on [x_min, x_max) with n nodes and return both
/// transforms, the Hilbert one with the far-field correction applied.
template <class Phi>
HilbertSpectra hilbert_spectra(Phi&& phi, double x_min, double x_max, int n, const PvIntegrandSpec& spec) {
    if (!(x_max > x_min) || n < 4) throw InvalidParameter("hilbert_spectra: bad window");
    const double dx = (x_max - x_min) / n;
    HilbertSpectra out;
    std::vector<double> samples(n);
    double max_phi = 0.0;
    for (int j = 0; j < n; ++j) {
        samples[j] = phi(x_min + j * dx);
        max_phi = std::max(max_phi, std::abs(samples[j]));
    }
    const double edge = std::max(std::abs(phi(x_min)), std::abs(phi(x_max)));
    out.truncation_warning = edge > 1e-10 * max_phi;

    out.h_samples.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        const auto r = hilbert(phi, x_min + j * dx, spec);
        out.h_samples[j] = r.value;
        out.truncation_warning = out.truncation_warning || r.truncation_warning;
    }
    out.moments = sample_moments(samples, x_min, dx);
    const FarFieldModel far = FarFieldModel::from_moments(out.moments);

    std::vector<double> remainder(n);
    for (int j = 0; j < n; ++j) remainder[j] = out.h_samples[j] - far(x_min + j * dx);

    out.phi_hat = window_transform(samples, x_min, dx);
    out.h_hat = window_transform(remainder, x_min, dx);
    out.xi.resize(n);
    for (int k = 0; k < n; ++k) {
        out.xi[k] = 2.0 * pi * fft::signed_index(k, n) / (n * dx);
        out.h_hat[k] += far.transform(out.xi[k]);
    }
    return out;
}

struct SymbolCheckResult {
    double deviation = 0.0;
    bool truncation_warning = false;
};

/// max over xi != 0 of |H^phi(xi) + i sign(xi) phi^(xi)| / max |phi^|.
template <class Phi>
SymbolCheckResult hilbert_symbol_check(Phi&& phi, double x_min, double x_max, int n,
                                       const PvIntegrandSpec& spec) {
    const HilbertSpectra s = hilbert_spectra(phi, x_min, x_max, n, spec);
    SymbolCheckResult out;
    out.truncation_warning = s.truncation_warning;
    double scale = 0.0;
    for (const auto& p : s.phi_hat) scale = std::max(scale, std::abs(p));
    if (scale == 0.0) return out;
    for (std::size_t k = 0; k < s.xi.size(); ++k) {
        if (s.xi[k] == 0.0) continue;
        const double sg = s.xi[k] > 0.0 ? 1.0 : -1.0;
        const complex expected = complex(0.0, -sg) * s.phi_hat[k];
        out.deviation = std::max(out.deviation, std::abs(s.h_hat[k] - expected) / scale);
    }
    return out;
}

/// ||H phi||_2 / ||phi||_2 with the window part by the trapezoid rule and
/// the tails |x| > window from the four-term far-field expansion.
template <class Phi>
double hilbert_l2_ratio(Phi&& phi, double x_min, double x_max, int n, const PvIntegrandSpec& spec) {
    const HilbertSpectra s = hilbert_spectra(phi, x_min, x_max, n, spec);
    const double dx = (x_max - x_min) / n;
    double phi2 = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double p = phi(x_min + j * dx);
        phi2 += (j == 0 || j == n ? 0.5 : 1.0) * p * p;
    }
    phi2 *= dx;
    double h2 = 0.0;
    for (int j = 0; j <= n; ++j) h2 += (j == 0 || j == n ? 0.5 : 1.0) * s.h_samples[j] * s.h_samples[j];
    h2 *= dx;

    std::array<double, 4> c{};
    for (int i = 0; i < 4; ++i) c[i] = s.moments[i] / pi;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const int p = a + b + 2;
            const double right = x_max > 0.0 ? std::pow(x_max, 1 - p) / (p - 1) : 0.0;
            const double left = x_min < 0.0 ? ((p % 2) ? -1.0 : 1.0) * std::pow(-x_min, 1 - p) / (p - 1) : 0.0;
            h2 += c[a] * c[b] * (right + left);
        }
    }
    return phi2 > 0.0 ? std::sqrt(h2 / phi2) : 0.0;
}

} // namespace landau
