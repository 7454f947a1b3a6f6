#pragma once

// Conductivity symbols of the uniform unmagnetized plasma and the operators
// built from them.
//
//   sigma_nu(omega, k) = -i (q^2/m) int v F'(v) / (omega - k v + i nu) dv
//   sigma_ph(omega, k) = -i (omega_p^2 / 4 pi) [ (pi/k) H(G)(omega/k)
//                                              - i (pi/|k|) G(omega/k) ]
//
// The Landau term carries 1/|k|: the nu -> 0+ limit of
// int dt / (k^2 t^2 + 1) is pi/|k| for either sign of k.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "landau/errors.hpp"
#include "landau/hilbert.hpp"
#include "landau/kinetics.hpp"
#include "landau/parallel.hpp"
#include "landau/quadrature.hpp"

namespace landau {

inline constexpr complex I{0.0, 1.0};

/// omega_p^2 / (4 pi) = q^2 n / m
inline double conductivity_scale(const EquilibriumDistribution& eq) {
    const auto& s = eq.species();
    return s.charge * s.charge * s.density / s.mass;
}

struct SymbolQuadrature {
    double abs_tol = 1e-12;
    double rel_tol = 1e-11;
    int max_subdivisions = 20000;
};

/// Regularized symbol by adaptive complex quadrature over [-V, V]. The
/// Lorentzian of width w = nu/|k| at v = omega/k is covered by panels of w/4
/// within 10 w of the resonance and geometric panels outside.
inline complex symbol_sigma_nu(const EquilibriumDistribution& eq, double omega, double k, double nu,
                               const SymbolQuadrature& q = {}) {
    if (!(nu > 0.0)) throw InvalidParameter("symbol_sigma_nu requires nu > 0");
    const double V = eq.velocity_half_width(std::abs(omega), std::abs(k));
    std::vector<double> cuts{0.0};
    if (k != 0.0) {
        const double r = omega / k;
        const double w = nu / std::abs(k);
        if (std::abs(r) < V + 10.0 * w) {
            for (int j = -40; j <= 40; ++j) cuts.push_back(r + 0.25 * w * j);
            for (double d = 20.0 * w; d < 2.0 * V; d *= 2.0) {
                cuts.push_back(r - d);
                cuts.push_back(r + d);
            }
        }
    }
    auto integrand = [&](double v) { return v * eq.dF(v) / complex(omega - k * v, nu); };
    const complex integral = quad::integrate_or_throw(integrand, -V, V, cuts,
                                                      {q.abs_tol, q.rel_tol, q.max_subdivisions},
                                                      "sigma_nu quadrature did not converge");
    const auto& s = eq.species();
    return -I * (s.charge * s.charge / s.mass) * integral;
}

/// Which coefficient multiplies the Landau (G) term of the limiting symbol.
/// `signed_one_over_k` is kept only to demonstrate that it is wrong for k < 0.
enum class LandauConvention { absolute_k, signed_one_over_k };

/// H(G)(u) by direct symmetric-difference quadrature.
inline double hilbert_of_G(const EquilibriumDistribution& eq, double u) {
    const double extent = 10.0 * eq.species().thermal_speed;
    auto g = [&eq](double v) { return eq.G(v); };
    return hilbert(g, u, PvIntegrandSpec::covering(u, extent, 160.0)).value;
}

inline complex limiting_from_parts(const EquilibriumDistribution& eq, double k, double hilbert_g, double g,
                                   LandauConvention convention) {
    const double landau_k = convention == LandauConvention::absolute_k ? std::abs(k) : k;
    return -I * conductivity_scale(eq) * ((pi / k) * hilbert_g - I * (pi / landau_k) * g);
}

/// Limiting symbol with a direct Hilbert evaluation; k = 0 is outside its domain.
inline complex symbol_sigma_ph(const EquilibriumDistribution& eq, double omega, double k,
                               LandauConvention convention = LandauConvention::absolute_k) {
    if (k == 0.0) throw DomainError("limiting conductivity is undefined at k = 0");
    const double u = omega / k;
    return limiting_from_parts(eq, k, hilbert_of_G(eq, u), eq.G(u), convention);
}

/// H(G) tabulated on [-range, range] with spacing `step`, read back with
/// four-point Lagrange interpolation. Outside the table, direct evaluation.
class HilbertTable {
public:
    HilbertTable(const EquilibriumDistribution& eq, double range, double step = 0.01, unsigned threads = 1)
        : eq_(eq), range_(range), step_(step) {
        if (!(range > 0.0) || !(step > 0.0)) throw InvalidParameter("HilbertTable: range and step must be positive");
        const int n = static_cast<int>(std::ceil(2.0 * range / step));
        // two guard nodes on each side keep the stencil inside the table
        origin_ = -range - 2.0 * step;
        values_.resize(n + 5);
        parallel_for(values_.size(), threads, [&](std::size_t i) {
            values_[i] = hilbert_of_G(eq_, origin_ + i * step_);
        });
    }

    double range() const { return range_; }

    double operator()(double u) const {
        if (std::abs(u) > range_) return hilbert_of_G(eq_, u);
        const double pos = (u - origin_) / step_;
        const int i = std::clamp(static_cast<int>(std::floor(pos)), 1, static_cast<int>(values_.size()) - 3);
        const double s = pos - i;
        const double y0 = values_[i - 1], y1 = values_[i], y2 = values_[i + 1], y3 = values_[i + 2];
        return y0 * (-s * (s - 1.0) * (s - 2.0) / 6.0) + y1 * ((s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0)
               + y2 * (-(s + 1.0) * s * (s - 2.0) / 2.0) + y3 * ((s + 1.0) * s * (s - 1.0) / 6.0);
    }

private:
    EquilibriumDistribution eq_;
    double range_;
    double step_;
    double origin_ = 0.0;
    std::vector<double> values_;
};

enum class SymbolKind { regularized, limiting };

/// A conductivity symbol (omega, k) -> complex, either sigma_nu or sigma_ph.
class ConductivitySymbol {
public:
    static ConductivitySymbol regularized(const EquilibriumDistribution& eq, double nu, SymbolQuadrature q = {}) {
        if (!(nu > 0.0)) throw InvalidParameter("regularized symbol requires nu > 0");
        ConductivitySymbol s(SymbolKind::regularized, eq);
        s.nu_ = nu;
        s.quadrature_ = q;
        return s;
    }

    /// `table_range` > 0 precomputes H(G) on |u| <= table_range.
    static ConductivitySymbol limiting(const EquilibriumDistribution& eq, double table_range = 0.0,
                                      LandauConvention convention = LandauConvention::absolute_k,
                                      unsigned threads = 1) {
        ConductivitySymbol s(SymbolKind::limiting, eq);
        s.convention_ = convention;
        if (table_range > 0.0) s.table_ = std::make_shared<const HilbertTable>(eq, table_range, 0.01, threads);
        return s;
    }

    SymbolKind kind() const { return kind_; }
    double nu() const { return nu_; }
    const EquilibriumDistribution& equilibrium() const { return eq_; }

    complex operator()(double omega, double k) const {
        if (kind_ == SymbolKind::regularized) return symbol_sigma_nu(eq_, omega, k, nu_, quadrature_);
        if (k == 0.0) throw DomainError("limiting conductivity is undefined at k = 0");
        if (!table_) return symbol_sigma_ph(eq_, omega, k, convention_);
        const double u = omega / k;
        return limiting_from_parts(eq_, k, (*table_)(u), eq_.G(u), convention_);
    }

private:
    ConductivitySymbol(SymbolKind kind, const EquilibriumDistribution& eq) : kind_(kind), eq_(eq) {}

    SymbolKind kind_;
    EquilibriumDistribution eq_;
    double nu_ = 0.0;
    SymbolQuadrature quadrature_{};
    LandauConvention convention_ = LandauConvention::absolute_k;
    std::shared_ptr<const HilbertTable> table_;
};

// ---------------------------------------------------------------------------
// Cutoff

/// chi(z) = 1 on |z| <= 1/2, 0 on |z| >= 1, joined by the exp(-1/y) smooth
/// step. Used as chi(k lambda).
struct CutoffFunction {
    double lambda = 1.0;

    static double chi(double z) {
        const double a = std::abs(z);
        if (a <= 0.5) return 1.0;
        if (a >= 1.0) return 0.0;
        const double y = 2.0 * (1.0 - a); // 1 at a = 1/2, 0 at a = 1
        const double p = std::exp(-1.0 / y);
        const double q = std::exp(-1.0 / (1.0 - y));
        return p / (p + q);
    }

    double weight(double k) const { return chi(k * lambda); }
};

inline CutoffFunction make_cutoff(double lambda) {
    if (!(lambda > 0.0)) throw InvalidParameter("cutoff scale lambda must be positive");
    return CutoffFunction{lambda};
}

// ---------------------------------------------------------------------------
// Multiplier application on a grid

struct MultiplierResult {
    Array2D<double> j;
    double imag_ratio = 0.0;  // max |Im| / max |Re| of the inverse transform
    double edge_ratio = 0.0;  // boundary magnitude of E and j relative to their maxima
    bool truncation_warning = false;
};

/// Symbol table range that covers every mode a multiplier with this cutoff
/// can touch on this grid.
inline double multiplier_table_range(const SpaceTimeGrid& grid, const CutoffFunction& cutoff) {
    const SpectralGrid spectral(grid);
    return spectral.omega_nyquist() * 2.0 * cutoff.lambda * 1.01 + 1.0;
}

/// j = inverse DFT [ (1 - chi(k lambda)) sigma(omega, k) E^(omega, k) ].
/// The k = 0 column has weight 0 (chi(0) = 1); Nyquist bins, whose sign is
/// ambiguous, are dropped.
inline MultiplierResult apply_multiplier(const FieldPerturbation& field, const ConductivitySymbol& symbol,
                                         const CutoffFunction& cutoff, const SpaceTimeGrid& grid,
                                         unsigned threads = 1) {
    grid.validate();
    const Array2D<double> samples = sample(field, grid);
    Array2D<complex> spectrum = sampled_spectrum(samples, grid);
    const SpectralGrid spectral(grid);

    parallel_for(static_cast<std::size_t>(grid.n_t), threads, [&](std::size_t row) {
        const int m = static_cast<int>(row);
        for (int n = 0; n < grid.n_x; ++n) {
            complex& cell = spectrum(m, n);
            if (spectral.is_nyquist_row(m) || spectral.is_nyquist_col(n)) {
                cell = 0.0;
                continue;
            }
            const double k = spectral.k(n);
            const double w = 1.0 - cutoff.weight(k);
            if (w == 0.0 || cell == 0.0) {
                cell = 0.0;
                continue;
            }
            cell *= w * symbol(spectral.omega(m), k);
        }
    });

    const Array2D<complex> back = inverse_sampled_spectrum(std::move(spectrum), grid);
    MultiplierResult out;
    out.j = Array2D<double>(grid.n_t, grid.n_x);
    double max_re = 0.0, max_im = 0.0;
    for (std::size_t i = 0; i < back.data.size(); ++i) {
        out.j.data[i] = back.data[i].real();
        max_re = std::max(max_re, std::abs(back.data[i].real()));
        max_im = std::max(max_im, std::abs(back.data[i].imag()));
    }
    out.imag_ratio = max_re > 0.0 ? max_im / max_re : 0.0;

    auto edge = [&](const Array2D<double>& a) {
        double peak = 0.0, rim = 0.0;
        for (int m = 0; m < a.n0; ++m)
            for (int n = 0; n < a.n1; ++n) {
                const double v = std::abs(a(m, n));
                peak = std::max(peak, v);
                if (m == 0 || n == 0 || m == a.n0 - 1 || n == a.n1 - 1) rim = std::max(rim, v);
            }
        return peak > 0.0 ? rim / peak : 0.0;
    };
    out.edge_ratio = std::max(edge(samples), edge(out.j));
    out.truncation_warning = out.edge_ratio > 1e-6;
    return out;
}

// ---------------------------------------------------------------------------
// Pairings with a spectral test function psi(omega, k)

using SpectralTestFunction = std::function<complex(double, double)>;

/// Sign of the Hilbert term in the remainder. The substitution omega = k v
/// together with the antisymmetry of H under pairing gives -pi H; the
/// `plus_hilbert` variant exists so tests can show it is wrong.
enum class RemainderConvention { derived, plus_hilbert };

struct PairingOptions {
    double spectral_cut = 1e-17;   // |E^| below which the (omega, k) box is cut
    double abs_tol = 1e-13;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
    double nodes_per_unit = 96.0;  // density of the inner Hilbert rule
    RemainderConvention convention = RemainderConvention::derived;
};

/// < sigma_{lambda,1-chi} E, psi^ > = int int (1 - chi(k lambda)) sigma(omega,k) E^ psi domega dk.
inline complex cutoff_multiplier_pairing(const FieldPerturbation& field, const SpectralTestFunction& psi,
                                         const CutoffFunction& cutoff, const ConductivitySymbol& symbol,
                                         const PairingOptions& opt = {}) {
    const SpectralExtent box = field.spectral_extent(opt.spectral_cut);
    const double k_inner = 0.5 / cutoff.lambda;
    const double k_outer = 1.0 / cutoff.lambda;
    if (box.k_max <= k_inner) return 0.0;
    const quad::Tolerance tol{opt.abs_tol, opt.rel_tol, opt.max_subdivisions};

    auto inner = [&](double k) {
        const double w = 1.0 - cutoff.weight(k);
        if (w == 0.0) return complex{};
        auto f = [&](double omega) { return symbol(omega, k) * field.spectrum(omega, k) * psi(omega, k); };
        return w * quad::integrate_or_throw(f, -box.omega_max, box.omega_max, tol, "pairing: omega integral");
    };
    const double cuts_pos[] = {k_outer};
    const double cuts_neg[] = {-k_outer};
    return quad::integrate_or_throw(inner, k_inner, box.k_max, cuts_pos, tol, "pairing: k integral")
           + quad::integrate_or_throw(inner, -box.k_max, -k_inner, cuts_neg, tol, "pairing: k integral");
}

/// < sigma_{lambda,chi} E, psi^ > =
///   -i (omega_p^2/4pi) int int chi(k lambda) G(v) [ -pi H_omega(E^psi(., k))(k v)
///                                                   - i pi E^psi(k v, k) ] dk dv.
/// H acts in omega at fixed k.
inline complex remainder_pairing(const FieldPerturbation& field, const SpectralTestFunction& psi,
                                 const CutoffFunction& cutoff, const EquilibriumDistribution& eq,
                                 const PairingOptions& opt = {}) {
    if (!field.has_spectrum())
        throw UnsupportedSpectrum("remainder_pairing needs a field with a closed-form spectrum");
    const SpectralExtent box = field.spectral_extent(opt.spectral_cut);
    if (box.omega_max == 0.0 && box.k_max == 0.0) return 0.0;
    const double V = eq.velocity_half_width();
    const double k_edge = 1.0 / cutoff.lambda;
    const quad::Tolerance tol{opt.abs_tol, opt.rel_tol, opt.max_subdivisions};
    const double hilbert_sign = opt.convention == RemainderConvention::derived ? -1.0 : 1.0;

    auto inner = [&](double k) {
        const double w = cutoff.weight(k);
        if (w == 0.0) return complex{};
        auto phi = [&](double omega) { return field.spectrum(omega, k) * psi(omega, k); };
        auto over_v = [&](double v) {
            const double g = eq.G(v);
            if (g == 0.0) return complex{};
            const double at = k * v;
            const auto spec = PvIntegrandSpec::covering(at, box.omega_max, opt.nodes_per_unit);
            const complex h = hilbert(phi, at, spec).value;
            return g * (hilbert_sign * pi * h - I * pi * phi(at));
        };
        const double v_cuts[] = {0.0};
        return w * quad::integrate_or_throw(over_v, -V, V, v_cuts, tol, "remainder: v integral");
    };
    const double k_cuts[] = {-0.5 * k_edge, 0.0, 0.5 * k_edge};
    const complex total = quad::integrate_or_throw(inner, -k_edge, k_edge, k_cuts, tol, "remainder: k integral");
    return -I * conductivity_scale(eq) * total;
}

// ---------------------------------------------------------------------------
// nu -> 0 convergence of the symbol

struct SymbolProbe {
    double omega = 0.0;
    double k = 0.0;
};

struct SymbolRow {
    double omega, k, nu, re_sigma, im_sigma;
};

struct SymbolSweepReport {
    std::vector<SymbolRow> rows;       // limit first (nu = 0), then the sweep, per probe
    std::vector<double> nus;
    /// |sigma_nu - sigma_ph| per probe (outer) per nu (inner)
    std::vector<std::vector<double>> abs_diff;
    std::vector<double> final_relative; // last column / |sigma_ph| (or / scale for null probes)
    bool final_below_threshold = true;
    // sign-of-k check on k < 0 probes at the smallest nu
    double negative_k_error_abs = 0.0;     // max relative error, |k| convention
    double negative_k_error_signed = 0.0; // max relative error, signed 1/k convention
    bool sign_check_passed = true;
    std::vector<std::string> violations;
};

/// Tabulate sigma_nu against sigma_ph on probes with k != 0. Probes where
/// sigma_ph vanishes are measured against the scale omega_p^2/4pi.
inline SymbolSweepReport symbol_convergence_sweep(const EquilibriumDistribution& eq,
                                                  std::span<const SymbolProbe> probes,
                                                  std::span<const double> sweep, double threshold,
                                                  const SymbolQuadrature& q = {}, unsigned threads = 1) {
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        if (!(sweep[i] > 0.0)) throw InvalidParameter("symbol sweep values must be positive");
        if (i > 0 && !(sweep[i] < sweep[i - 1])) throw InvalidParameter("symbol sweep must be strictly decreasing");
    }
    if (sweep.empty()) throw InvalidParameter("symbol sweep is empty");
    for (const auto& p : probes)
        if (p.k == 0.0) throw DomainError("symbol sweep probes need k != 0");

    SymbolSweepReport report;
    report.nus.assign(sweep.begin(), sweep.end());
    const double scale = conductivity_scale(eq);
    const std::size_t n_nu = sweep.size();

    std::vector<complex> limit(probes.size()), signed_form(probes.size());
    std::vector<complex> reg(probes.size() * n_nu);
    parallel_for(probes.size() * (n_nu + 1), threads, [&](std::size_t idx) {
        const std::size_t p = idx / (n_nu + 1);
        const std::size_t j = idx % (n_nu + 1);
        if (j == 0) {
            limit[p] = symbol_sigma_ph(eq, probes[p].omega, probes[p].k);
            signed_form[p] = symbol_sigma_ph(eq, probes[p].omega, probes[p].k, LandauConvention::signed_one_over_k);
        } else {
            reg[p * n_nu + j - 1] = symbol_sigma_nu(eq, probes[p].omega, probes[p].k, sweep[j - 1], q);
        }
    });

    bool any_negative = false;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        const auto& pr = probes[p];
        report.rows.push_back({pr.omega, pr.k, 0.0, limit[p].real(), limit[p].imag()});
        std::vector<double> diffs;
        for (std::size_t j = 0; j < n_nu; ++j) {
            const complex s = reg[p * n_nu + j];
            report.rows.push_back({pr.omega, pr.k, sweep[j], s.real(), s.imag()});
            diffs.push_back(std::abs(s - limit[p]));
        }
        const double denom = std::abs(limit[p]) > 0.0 ? std::abs(limit[p]) : scale;
        const double rel = diffs.back() / denom;
        report.final_relative.push_back(rel);
        if (!(rel < threshold)) {
            report.final_below_threshold = false;
            report.violations.push_back("probe (" + std::to_string(pr.omega) + ", " + std::to_string(pr.k)
                                        + "): final relative deviation " + std::to_string(rel));
        }
        if (pr.k < 0.0) {
            any_negative = true;
            const complex last = reg[p * n_nu + n_nu - 1];
            report.negative_k_error_abs = std::max(report.negative_k_error_abs, std::abs(last - limit[p]) / denom);
            report.negative_k_error_signed =
                std::max(report.negative_k_error_signed, std::abs(last - signed_form[p]) / denom);
        }
        report.abs_diff.push_back(std::move(diffs));
    }
    if (any_negative) {
        report.sign_check_passed = report.negative_k_error_abs < 1e-2
                                   && report.negative_k_error_signed > 10.0 * report.negative_k_error_abs;
        if (!report.sign_check_passed) report.violations.push_back("sign-of-k check failed");
    }
    return report;
}

} // namespace landau
