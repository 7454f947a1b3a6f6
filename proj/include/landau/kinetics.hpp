#pragma once

// Shared domain types: species and equilibrium, prescribed field packets,
// space-time sampling grids and their spectral duals.
//
// Transform convention throughout the library:
//     E^(omega, k) = int int E(t, x) exp(i omega t - i k x) dt dx,
// so time and space carry opposite signs.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "landau/errors.hpp"
#include "landau/fft.hpp"

namespace landau {

using complex = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Species and equilibrium

/// Charge, mass, background density and thermal speed of one species in
/// Gaussian (c.g.s.) units. The default is the nondimensional reference
/// species q = m = n = v_t = 1, for which omega_p^2 = 4 pi.
struct PlasmaSpecies {
    double charge = 1.0;
    double mass = 1.0;
    double density = 1.0;
    double thermal_speed = 1.0;

    void validate() const {
        if (!(mass > 0.0)) throw InvalidParameter("species mass must be positive");
        if (!(density > 0.0)) throw InvalidParameter("species density must be positive");
        if (!(thermal_speed > 0.0))
            throw InvalidParameter("species thermal speed must be positive");
        if (!std::isfinite(charge)) throw InvalidParameter("species charge must be finite");
    }

    double charge_over_mass() const { return charge / mass; }
    double plasma_frequency_squared() const { return 4.0 * pi * charge * charge * density / mass; }
};

/// Spatially uniform background F(v) with its derivative. G(v) = v F'(v) / n
/// is the shape entering the conductivity.
class EquilibriumDistribution {
public:
    using Profile = std::function<double(double)>;

    EquilibriumDistribution(PlasmaSpecies species, Profile f, Profile df)
        : species_(species), f_(std::move(f)), df_(std::move(df)) {
        species_.validate();
    }

    const PlasmaSpecies& species() const { return species_; }
    double F(double v) const { return f_(v); }
    double dF(double v) const { return df_(v); }
    double G(double v) const { return v * df_(v) / species_.density; }

    /// Half width V of the truncated velocity window [-V, V]:
    /// max(8 v_t, omega_max / k_min + 4 v_t). The second branch keeps the
    /// resonance v = omega/k inside the window with room for G's tail.
    double velocity_half_width(double omega_max = 0.0, double k_min = 0.0) const {
        const double vt = species_.thermal_speed;
        double half = 8.0 * vt;
        if (k_min > 0.0) half = std::max(half, std::abs(omega_max) / k_min + 4.0 * vt);
        return half;
    }

    /// sup |F'| on the truncated window, sampled at 4001 points.
    double max_abs_dF() const {
        const double V = velocity_half_width();
        double m = 0.0;
        for (int i = 0; i <= 4000; ++i) m = std::max(m, std::abs(dF(-V + 2.0 * V * i / 4000.0)));
        return m;
    }

private:
    PlasmaSpecies species_;
    Profile f_;
    Profile df_;
};

/// F(v) = n exp(-v^2/v_t^2) / (sqrt(pi) v_t), with the closed-form derivative.
inline EquilibriumDistribution make_maxwellian(const PlasmaSpecies& species) {
    species.validate();
    const double n = species.density;
    const double vt = species.thermal_speed;
    const double norm = n / (std::sqrt(pi) * vt);
    auto f = [norm, vt](double v) { return norm * std::exp(-(v * v) / (vt * vt)); };
    auto df = [norm, vt](double v) {
        return -2.0 * v / (vt * vt) * norm * std::exp(-(v * v) / (vt * vt));
    };
    return {species, f, df};
}

// ---------------------------------------------------------------------------
// Field perturbations

/// Closed time interval outside of which the field is below a given cut.
struct TimeSupport {
    double lo = 0.0;
    double hi = -1.0;
    bool empty() const { return !(lo <= hi); }
};

/// One Gaussian packet A exp(-(t-t0)^2/tau^2 - (x-x0)^2/ell^2) cos(k0 x - omega0 t).
/// With omega0 = k0 = 0 it is the plain Gaussian packet.
struct Packet {
    double amplitude = 1.0;
    double t0 = 0.0;
    double x0 = 0.0;
    double tau = 1.0;
    double ell = 1.0;
    double omega0 = 0.0;
    double k0 = 0.0;

    double operator()(double t, double x) const {
        const double dt = (t - t0) / tau;
        const double dx = (x - x0) / ell;
        return amplitude * std::exp(-dt * dt - dx * dx) * std::cos(k0 * x - omega0 * t);
    }

    complex spectrum(double omega, double k) const {
        auto lobe = [&](double w0, double kk0) {
            const double dw = omega - w0;
            const double dk = k - kk0;
            const double mag = pi * tau * ell * std::exp(-0.25 * (tau * tau * dw * dw + ell * ell * dk * dk));
            return mag * std::polar(1.0, dw * t0 - dk * x0);
        };
        if (omega0 == 0.0 && k0 == 0.0) return amplitude * lobe(0.0, 0.0);
        return 0.5 * amplitude * (lobe(omega0, k0) + lobe(-omega0, -k0));
    }

    /// Interval outside of which |packet| <= cut.
    TimeSupport time_support(double cut) const;

    void validate() const {
        if (!(tau > 0.0) || !(ell > 0.0)) throw InvalidParameter("packet widths must be positive");
        if (!std::isfinite(amplitude) || !std::isfinite(t0) || !std::isfinite(x0)
            || !std::isfinite(omega0) || !std::isfinite(k0))
            throw InvalidParameter("packet parameters must be finite");
    }
};

inline TimeSupport Packet::time_support(double cut) const {
    const double a = std::abs(amplitude);
    if (a <= cut) return {};
    const double half = tau * std::sqrt(std::log(a / cut));
    return {t0 - half, t0 + half};
}

enum class FieldKind { gaussian_packet, modulated_packet, superposition, custom };

inline std::string to_string(FieldKind kind) {
    switch (kind) {
    case FieldKind::gaussian_packet: return "gaussian-packet";
    case FieldKind::modulated_packet: return "modulated-packet";
    case FieldKind::superposition: return "superposition";
    case FieldKind::custom: return "custom";
    }
    return "unknown";
}

/// Half extents |omega| <= omega_max, |k| <= k_max of the spectrum above a cut.
struct SpectralExtent {
    double omega_max = 0.0;
    double k_max = 0.0;
};

/// A prescribed real field E(t, x): a finite sum of packets, optionally plus
/// user callables (which carry no closed-form spectrum).
class FieldPerturbation {
public:
    using Callable = std::function<double(double, double)>;

    struct CustomTerm {
        Callable fn;
        TimeSupport support;
        double bound = 0.0; // sup |fn|
    };

    static FieldPerturbation gaussian_packet(double amplitude, double t0, double x0, double tau,
                                             double ell) {
        Packet p{amplitude, t0, x0, tau, ell, 0.0, 0.0};
        p.validate();
        return FieldPerturbation(FieldKind::gaussian_packet, {p}, {});
    }

    static FieldPerturbation modulated_packet(double amplitude, double t0, double x0, double tau,
                                              double ell, double omega0, double k0) {
        Packet p{amplitude, t0, x0, tau, ell, omega0, k0};
        p.validate();
        return FieldPerturbation(FieldKind::modulated_packet, {p}, {});
    }

    /// sum_i c_i E_i
    static FieldPerturbation superposition(const std::vector<std::pair<double, FieldPerturbation>>& terms) {
        std::vector<Packet> packets;
        std::vector<CustomTerm> customs;
        for (const auto& [c, field] : terms) {
            for (Packet p : field.packets_) {
                p.amplitude *= c;
                packets.push_back(p);
            }
            for (CustomTerm term : field.customs_) {
                term.fn = [c, fn = term.fn](double t, double x) { return c * fn(t, x); };
                term.bound *= std::abs(c);
                customs.push_back(std::move(term));
            }
        }
        return FieldPerturbation(FieldKind::superposition, std::move(packets), std::move(customs));
    }

    /// A field given by a callable that vanishes outside `support` and is
    /// bounded by `bound`. Has no spectrum.
    static FieldPerturbation custom(Callable fn, TimeSupport support, double bound) {
        return FieldPerturbation(FieldKind::custom, {}, {CustomTerm{std::move(fn), support, bound}});
    }

    FieldKind kind() const { return kind_; }
    const std::vector<Packet>& packets() const { return packets_; }
    const std::vector<CustomTerm>& customs() const { return customs_; }

    double operator()(double t, double x) const {
        double e = 0.0;
        for (const auto& p : packets_) e += p(t, x);
        for (const auto& c : customs_) e += c.fn(t, x);
        return e;
    }

    bool has_spectrum() const { return customs_.empty(); }

    complex spectrum(double omega, double k) const {
        if (!has_spectrum())
            throw UnsupportedSpectrum("field of kind '" + to_string(kind_)
                                      + "' has no closed-form spectrum");
        complex s{};
        for (const auto& p : packets_) s += p.spectrum(omega, k);
        return s;
    }

    /// sup |E| bound (sum of term amplitudes).
    double amplitude_bound() const {
        double b = 0.0;
        for (const auto& p : packets_) b += std::abs(p.amplitude);
        for (const auto& c : customs_) b += c.bound;
        return b;
    }

    /// Interval outside of which |E(t, x)| <= cut for every x.
    TimeSupport time_support(double cut) const {
        TimeSupport s;
        const double share = cut / std::max<std::size_t>(1, packets_.size() + customs_.size());
        auto merge = [&s](double lo, double hi) {
            if (s.empty()) {
                s = {lo, hi};
            } else {
                s.lo = std::min(s.lo, lo);
                s.hi = std::max(s.hi, hi);
            }
        };
        for (const auto& p : packets_) {
            const TimeSupport ps = p.time_support(share);
            if (!ps.empty()) merge(ps.lo, ps.hi);
        }
        for (const auto& c : customs_)
            if (!c.support.empty() && c.bound > 0.0) merge(c.support.lo, c.support.hi);
        return s;
    }

    /// Box containing the part of the spectrum above `cut`.
    SpectralExtent spectral_extent(double cut) const {
        SpectralExtent e;
        for (const auto& p : packets_) {
            const double peak = std::abs(p.amplitude) * pi * p.tau * p.ell;
            if (peak <= cut) continue;
            const double r = 2.0 * std::sqrt(std::log(peak / cut));
            e.omega_max = std::max(e.omega_max, std::abs(p.omega0) + r / p.tau);
            e.k_max = std::max(e.k_max, std::abs(p.k0) + r / p.ell);
        }
        return e;
    }

private:
    FieldPerturbation(FieldKind kind, std::vector<Packet> packets, std::vector<CustomTerm> customs)
        : kind_(kind), packets_(std::move(packets)), customs_(std::move(customs)) {}

    FieldKind kind_;
    std::vector<Packet> packets_;
    std::vector<CustomTerm> customs_;
};

inline double eval_field(const FieldPerturbation& field, double t, double x) { return field(t, x); }

inline complex spectrum_field(const FieldPerturbation& field, double omega, double k) {
    return field.spectrum(omega, k);
}

// ---------------------------------------------------------------------------
// Grids

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

/// Uniform periodic sampling t_a = t_min + a dt, a < n_t (the right end is
/// excluded), likewise in x. The optional velocity window is used by the
/// characteristic-route current.
struct SpaceTimeGrid {
    double t_min = -16.0;
    double t_max = 16.0;
    int n_t = 256;
    double x_min = -16.0;
    double x_max = 16.0;
    int n_x = 256;
    double v_min = 0.0;
    double v_max = 0.0;
    int n_v = 0;

    void validate() const {
        if (!(t_max > t_min)) throw InvalidParameter("grid: t_max must exceed t_min");
        if (!(x_max > x_min)) throw InvalidParameter("grid: x_max must exceed x_min");
        if (!is_power_of_two(n_t)) throw InvalidParameter("grid: n_t must be a power of two");
        if (!is_power_of_two(n_x)) throw InvalidParameter("grid: n_x must be a power of two");
        if (n_v != 0 && !(v_max > v_min)) throw InvalidParameter("grid: v_max must exceed v_min");
    }

    double dt() const { return (t_max - t_min) / n_t; }
    double dx() const { return (x_max - x_min) / n_x; }
    double t(int a) const { return t_min + a * dt(); }
    double x(int b) const { return x_min + b * dx(); }
};

/// Dual nodes of a SpaceTimeGrid. A forward DFT bin (m, n) sits at
/// omega = -2 pi m~ / T and k = 2 pi n~ / L, where m~, n~ are signed indices:
/// the time direction is reversed by the exp(+i omega t) kernel.
struct SpectralGrid {
    explicit SpectralGrid(const SpaceTimeGrid& g) : grid(g) {}

    SpaceTimeGrid grid;

    double omega(int m) const { return -2.0 * pi * fft::signed_index(m, grid.n_t) / (grid.t_max - grid.t_min); }
    double k(int n) const { return 2.0 * pi * fft::signed_index(n, grid.n_x) / (grid.x_max - grid.x_min); }
    double omega_nyquist() const { return pi / grid.dt(); }
    double k_nyquist() const { return pi / grid.dx(); }
    bool is_nyquist_row(int m) const { return m == grid.n_t / 2; }
    bool is_nyquist_col(int n) const { return n == grid.n_x / 2; }
};

/// Row-major n0 x n1 array (rows = time, columns = space).
template <class T>
struct Array2D {
    int n0 = 0;
    int n1 = 0;
    std::vector<T> data;

    Array2D() = default;
    Array2D(int rows, int cols) : n0(rows), n1(cols), data(static_cast<std::size_t>(rows) * cols) {}

    T& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * n1 + j]; }
    const T& operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * n1 + j]; }
};

inline Array2D<double> sample(const FieldPerturbation& field, const SpaceTimeGrid& grid) {
    Array2D<double> out(grid.n_t, grid.n_x);
    for (int a = 0; a < grid.n_t; ++a)
        for (int b = 0; b < grid.n_x; ++b) out(a, b) = field(grid.t(a), grid.x(b));
    return out;
}

/// DFT approximation of the continuous transform in the library convention:
/// out(m, n) ~ int int u exp(i omega_m t - i k_n x) dt dx.
inline Array2D<complex> sampled_spectrum(const Array2D<double>& samples, const SpaceTimeGrid& grid) {
    Array2D<complex> out(samples.n0, samples.n1);
    for (std::size_t i = 0; i < samples.data.size(); ++i) out.data[i] = samples.data[i];
    fft::transform_2d(out.data, out.n0, out.n1, fft::Sign::forward);
    const SpectralGrid spectral(grid);
    const double cell = grid.dt() * grid.dx();
    for (int m = 0; m < out.n0; ++m)
        for (int n = 0; n < out.n1; ++n)
            out(m, n) *= cell * std::polar(1.0, spectral.omega(m) * grid.t_min - spectral.k(n) * grid.x_min);
    return out;
}

/// Inverse of sampled_spectrum (complex samples; callers take the real part).
inline Array2D<complex> inverse_sampled_spectrum(Array2D<complex> spectrum, const SpaceTimeGrid& grid) {
    const SpectralGrid spectral(grid);
    const double cell = grid.dt() * grid.dx();
    const double norm = 1.0 / (cell * grid.n_t * grid.n_x);
    for (int m = 0; m < spectrum.n0; ++m)
        for (int n = 0; n < spectrum.n1; ++n)
            spectrum(m, n) *= norm * std::polar(1.0, -(spectral.omega(m) * grid.t_min - spectral.k(n) * grid.x_min));
    fft::transform_2d(spectrum.data, spectrum.n0, spectrum.n1, fft::Sign::backward);
    return spectrum;
}

} // namespace landau
