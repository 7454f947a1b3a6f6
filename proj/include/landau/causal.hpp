#pragma once

// Causal and regularized perturbations of the distribution function along
// backward characteristics, and the currents they carry.
//
//   f_nu(t, x, v) = -(q/m) F'(v) int_{-inf}^t exp(-nu (t-s)) E(s, x - v (t-s)) ds
//
// nu = 0 is the causal limit and goes through exactly the same code.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "landau/errors.hpp"
#include "landau/kinetics.hpp"
#include "landau/parallel.hpp"
#include "landau/quadrature.hpp"

namespace landau {

struct QuadratureSpec {
    double abs_tol = 1e-13;
    double rel_tol = 1e-11;
    int max_subdivisions = 4000;
    /// |E| below which the time half-line is truncated.
    double tail_cut = 1e-15;
    /// Velocity integral: composite trapezoid from n_v intervals, doubled up
    /// to n_v_max until two levels agree to velocity_rel_tol.
    int n_v = 128;
    int n_v_max = 1 << 15;
    double velocity_rel_tol = 1e-9;

    void validate() const {
        if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
            throw InvalidParameter("quadrature tolerances must be positive");
        if (max_subdivisions < 1) throw InvalidParameter("max_subdivisions must be at least 1");
        if (!(tail_cut > 0.0) || tail_cut > abs_tol)
            throw InvalidParameter("tail_cut must be positive and not exceed abs_tol");
        if (n_v < 2 || n_v % 2 != 0 || n_v_max < n_v)
            throw InvalidParameter("velocity node counts must be even with n_v <= n_v_max");
        if (!(velocity_rel_tol > 0.0)) throw InvalidParameter("velocity_rel_tol must be positive");
    }

    quad::Tolerance tolerance() const { return {abs_tol, rel_tol, max_subdivisions}; }
};

/// f_nu for one species under a prescribed field. nu = 0 selects the causal
/// limit f. Immutable; safe to share across threads.
struct CausalSolution {
    double nu = 0.0;
    EquilibriumDistribution equilibrium;
    FieldPerturbation field;
    QuadratureSpec quadrature{};

    CausalSolution(double damping, EquilibriumDistribution eq, FieldPerturbation e, QuadratureSpec q = {})
        : nu(damping), equilibrium(std::move(eq)), field(std::move(e)), quadrature(q) {
        if (!(nu >= 0.0)) throw InvalidParameter("damping nu must be non-negative");
        quadrature.validate();
    }
};

namespace detail {

/// int_{-inf}^t exp(-nu (t-s)) w(X) E(s, X) ds with X = x - v (t - s).
///
/// Each packet is integrated over the part of the line where both its time
/// and space envelopes exceed the tail cut, with splits at its time
/// centre and where the characteristic crosses its spatial centre; custom
/// terms are integrated together. Summing per term keeps the result linear in
/// E up to rounding.
template <class Weight>
double characteristic_integral(const CausalSolution& sol, double t, double x, double v, Weight&& weight) {
    const auto& q = sol.quadrature;
    const double nu = sol.nu;
    const auto& field = sol.field;
    const std::size_t terms = field.packets().size() + (field.customs().empty() ? 0 : 1);
    const double share = q.tail_cut / std::max<std::size_t>(1, terms);

    auto along = [&](auto&& E, TimeSupport support, std::span<const double> cuts) {
        if (support.empty() || t <= support.lo) return 0.0;
        const double upper = std::min(t, support.hi);
        auto integrand = [&](double s) {
            const double X = x - v * (t - s);
            return std::exp(-nu * (t - s)) * weight(X) * E(s, X);
        };
        return quad::integrate_or_throw(integrand, support.lo, upper, cuts, q.tolerance(),
                                        "characteristic integral did not converge");
    };

    double total = 0.0;
    for (const auto& p : field.packets()) {
        TimeSupport support = p.time_support(share);
        std::array<double, 2> cuts{p.t0, p.t0};
        if (v != 0.0 && !support.empty()) {
            // the characteristic is inside the packet's spatial envelope only
            // while |x - v (t - s) - x0| <= ell sqrt(log(|A| / share))
            const double reach = p.ell * std::sqrt(std::log(std::abs(p.amplitude) / share));
            const double s1 = t - (x - p.x0 - reach) / v;
            const double s2 = t - (x - p.x0 + reach) / v;
            support.lo = std::max(support.lo, std::min(s1, s2));
            support.hi = std::min(support.hi, std::max(s1, s2));
            cuts[1] = t - (x - p.x0) / v;
        }
        total += along(p, support, cuts);
    }
    if (!field.customs().empty()) {
        TimeSupport support;
        for (const auto& c : field.customs()) {
            if (c.support.empty() || !(c.bound > 0.0)) continue;
            support = support.empty() ? c.support
                                      : TimeSupport{std::min(support.lo, c.support.lo), std::max(support.hi, c.support.hi)};
        }
        auto sum = [&](double s, double X) {
            double e = 0.0;
            for (const auto& c : field.customs()) e += c.fn(s, X);
            return e;
        };
        total += along(sum, support, {});
    }
    return total;
}

struct UnitWeight {
    double operator()(double) const { return 1.0; }
};

} // namespace detail

/// Regularized (nu > 0) or causal (nu = 0) perturbation f at (t, x, v).
inline double causal_f(const CausalSolution& sol, double t, double x, double v) {
    const double dF = sol.equilibrium.dF(v);
    if (dF == 0.0) return 0.0;
    const double qm = sol.equilibrium.species().charge_over_mass();
    return -qm * dF * detail::characteristic_integral(sol, t, x, v, detail::UnitWeight{});
}

/// The Cauchy datum at t = 0 that makes the solution tempered.
inline double initial_condition_f0(const CausalSolution& sol, double x, double v) {
    if (!(sol.nu > 0.0)) throw InvalidParameter("initial_condition_f0 requires nu > 0");
    return causal_f(sol, 0.0, x, v);
}

/// Centered-difference residual D_t f + nu f + v D_x f + source for any f.
template <class Fn>
double transport_residual(Fn&& f, double nu, double t, double x, double v, double h_t, double h_x,
                          double source) {
    if (!(h_t > 0.0) || !(h_x > 0.0)) throw InvalidParameter("finite-difference steps must be positive");
    const double dt = (f(t + h_t, x, v) - f(t - h_t, x, v)) / (2.0 * h_t);
    const double dx = (f(t, x + h_x, v) - f(t, x - h_x, v)) / (2.0 * h_x);
    return dt + nu * f(t, x, v) + v * dx + source;
}

/// L_nu f_nu + (q/m) E F' evaluated with centered differences of causal_f.
inline double residual_Lnu(const CausalSolution& sol, double t, double x, double v, double h_t, double h_x) {
    const double qm = sol.equilibrium.species().charge_over_mass();
    const double source = qm * sol.field(t, x) * sol.equilibrium.dF(v);
    auto f = [&sol](double tt, double xx, double vv) { return causal_f(sol, tt, xx, vv); };
    return transport_residual(f, sol.nu, t, x, v, h_t, h_x, source);
}

namespace detail {

template <class Weight>
double current_impl(const CausalSolution& sol, double t, double x, Weight&& weight, double density_scale) {
    const auto& q = sol.quadrature;
    const auto& eq = sol.equilibrium;
    const double V = eq.velocity_half_width();
    // |int E ds| <= sup|E| * (time support length), so nodes where even that
    // bound times |v F'| is below the tail cut are skipped
    const TimeSupport support = sol.field.time_support(q.tail_cut);
    const double e_bound = sol.field.amplitude_bound() * std::max(0.0, support.hi - support.lo);
    double w_bound = 1.0;
    if constexpr (!std::is_same_v<std::decay_t<Weight>, UnitWeight>) w_bound = INFINITY;
    auto integrand = [&](double v) {
        const double dF = eq.dF(v);
        if (std::abs(v * dF) * e_bound * w_bound < q.tail_cut) return 0.0;
        return v * dF * characteristic_integral(sol, t, x, v, weight);
    };
    auto r = quad::trapezoid_doubling(integrand, -V, V, q.n_v, q.n_v_max, q.velocity_rel_tol, q.abs_tol);
    if (!r.converged) throw QuadratureFailure("velocity integral did not converge", r.error);
    const auto& s = eq.species();
    return -s.charge * s.charge / s.mass * density_scale * r.value;
}

} // namespace detail

/// j(t, x) = q int v f(t, x, v) dv over the truncated velocity window.
inline double current_j(const CausalSolution& sol, double t, double x) {
    return detail::current_impl(sol, t, x, detail::UnitWeight{}, 1.0);
}

/// Current for the separable equilibrium n0(x) F~(v) with F~ = F / n: the
/// density profile is evaluated along the characteristic.
inline double current_j_profile(const CausalSolution& sol, const std::function<double(double)>& n0,
                                double t, double x) {
    return detail::current_impl(sol, t, x, n0, 1.0 / sol.equilibrium.species().density);
}

// ---------------------------------------------------------------------------
// nu -> 0 convergence of f_nu

struct ProbePoint {
    double t = 0.0;
    double x = 0.0;
    double v = 0.0;
};

struct SweepRow {
    double nu, t, x, v, f_value, f_limit, abs_err;
};

struct NuSweepReport {
    std::vector<SweepRow> rows;       // (nu, probe) in sweep order
    std::vector<double> nus;
    std::vector<double> max_error;    // max over probes of |f_nu - f|, per nu
    double max_abs_limit = 0.0;       // max over probes of |f|
    bool monotone = true;
    bool final_below_threshold = true;
    std::vector<std::string> violations;
};

/// Compare f_nu against the causal f on probe points for a strictly
/// decreasing positive sweep (a trailing 0 is accepted and dropped; the
/// nu = 0 reference is always computed). Violations are reported, not thrown.
inline NuSweepReport nu_sweep_f(const EquilibriumDistribution& eq, const FieldPerturbation& field,
                                std::span<const double> sweep, std::span<const ProbePoint> probes,
                                const QuadratureSpec& quadrature, double threshold,
                                double monotone_tol = 1e-9, unsigned threads = 1) {
    std::vector<double> nus(sweep.begin(), sweep.end());
    if (!nus.empty() && nus.back() == 0.0) nus.pop_back();
    if (nus.empty()) throw InvalidParameter("nu sweep must contain at least one positive value");
    for (std::size_t i = 0; i < nus.size(); ++i) {
        if (!(nus[i] > 0.0)) throw InvalidParameter("nu sweep values must be positive");
        if (i > 0 && !(nus[i] < nus[i - 1])) throw InvalidParameter("nu sweep must be strictly decreasing");
    }

    NuSweepReport report;
    report.nus = nus;
    const CausalSolution limit(0.0, eq, field, quadrature);
    std::vector<double> f_limit(probes.size());
    parallel_for(probes.size(), threads, [&](std::size_t i) {
        f_limit[i] = causal_f(limit, probes[i].t, probes[i].x, probes[i].v);
    });
    for (double f : f_limit) report.max_abs_limit = std::max(report.max_abs_limit, std::abs(f));

    for (double nu : nus) {
        const CausalSolution reg(nu, eq, field, quadrature);
        std::vector<double> f_nu(probes.size());
        parallel_for(probes.size(), threads, [&](std::size_t i) {
            f_nu[i] = causal_f(reg, probes[i].t, probes[i].x, probes[i].v);
        });
        double worst = 0.0;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const double err = std::abs(f_nu[i] - f_limit[i]);
            worst = std::max(worst, err);
            report.rows.push_back({nu, probes[i].t, probes[i].x, probes[i].v, f_nu[i], f_limit[i], err});
        }
        report.max_error.push_back(worst);
    }

    for (std::size_t i = 1; i < report.max_error.size(); ++i) {
        if (report.max_error[i] > report.max_error[i - 1] + monotone_tol) {
            report.monotone = false;
            report.violations.push_back("max |f_nu - f| increased from nu=" + std::to_string(nus[i - 1])
                                        + " to nu=" + std::to_string(nus[i]));
        }
    }
    const double last = report.max_error.back();
    if (last > threshold * report.max_abs_limit) {
        report.final_below_threshold = false;
        report.violations.push_back("final max |f_nu - f| = " + std::to_string(last)
                                    + " exceeds threshold * max|f|");
    }
    return report;
}

} // namespace landau
