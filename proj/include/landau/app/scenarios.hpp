#pragma once

// Scenario runner: executes a validated ScenarioConfig stage by stage, writes
// CSV artifacts and assembles a RunReport. Reports are built whether checks
// pass or not; a thrown computation error is recorded in the report.

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "landau/app/config.hpp"
#include "landau/app/csv.hpp"
#include "landau/causal.hpp"
#include "landau/conductivity.hpp"
#include "landau/hilbert.hpp"
#include "landau/model_problem.hpp"
#include "landau/special.hpp"

namespace landau::app {

enum class Status { pass, warn, fail, error };

inline std::string to_string(Status s) {
    switch (s) {
    case Status::pass: return "pass";
    case Status::warn: return "warn";
    case Status::fail: return "fail";
    case Status::error: return "error";
    }
    return "error";
}

struct Check {
    std::string name;
    Status status = Status::pass;
    double value = 0.0;
    double limit = 0.0;
    std::string detail;
};

struct StageTiming {
    std::string name;
    double seconds = 0.0;
};

struct RunReport {
    std::string scenario;
    std::string config_hash;
    std::vector<Check> checks;
    nlohmann::ordered_json summaries = nlohmann::ordered_json::object();
    std::vector<StageTiming> stages;
    std::vector<std::string> artifacts;
    std::string error;

    Status status() const {
        if (!error.empty()) return Status::error;
        Status worst = Status::pass;
        for (const auto& c : checks) worst = std::max(worst, c.status);
        return worst;
    }

    /// 0 for pass or warn, 1 otherwise.
    int exit_code() const { return status() == Status::pass || status() == Status::warn ? 0 : 1; }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["scenario"] = scenario;
        j["config_hash"] = config_hash;
        j["status"] = to_string(status());
        if (!error.empty()) j["error"] = error;
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : checks)
            j["checks"].push_back(
                {{"name", c.name}, {"status", to_string(c.status)}, {"value", c.value}, {"limit", c.limit}, {"detail", c.detail}});
        j["summaries"] = summaries;
        j["stages"] = nlohmann::ordered_json::array();
        for (const auto& s : stages) j["stages"].push_back({{"name", s.name}, {"seconds", s.seconds}});
        j["artifacts"] = artifacts;
        return j;
    }
};

struct RunOptions {
    std::string output_dir;
    unsigned threads = 1;
    std::function<void(const std::string&)> log; // progress lines, may be empty
};

namespace detail {

/// value <= tol * scale, where 0 <= 0 counts as a pass (all-zero input).
inline bool within(double value, double tol, double scale) {
    if (value == 0.0) return true;
    return value <= tol * scale;
}

inline double ratio(double num, double den) { return num == 0.0 ? 0.0 : num / den; }

class Runner {
public:
    Runner(const ScenarioConfig& c, const RunOptions& o, RunReport& r)
        : cfg(c), opt(o), report(r), eq(make_maxwellian(c.species)) {}

    const ScenarioConfig& cfg;
    const RunOptions& opt;
    RunReport& report;
    EquilibriumDistribution eq;

    template <class Body>
    void stage(const std::string& name, Body&& body) {
        if (opt.log) opt.log("stage " + name);
        const auto start = std::chrono::steady_clock::now();
        body();
        report.stages.push_back({name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()});
    }

    void check(const std::string& name, bool ok, double value, double limit, const std::string& detail = "") {
        report.checks.push_back({name, ok ? Status::pass : Status::fail, value, limit, detail});
    }
    void warn(const std::string& name, const std::string& detail) {
        report.checks.push_back({name, Status::warn, 0.0, 0.0, detail});
    }

    void write(const CsvTable& table, const std::string& file) {
        const auto path = std::filesystem::path(opt.output_dir) / file;
        table.write(path.string());
        report.artifacts.push_back(file);
    }

    // -----------------------------------------------------------------------

    void causal_solution() {
        const auto field = cfg.field();
        const CausalSolution sol(cfg.nu, eq, field, cfg.quadrature);
        const auto probes = cfg.probes.points();
        const double h = cfg.tol("h");

        stage("residual", [&] {
            std::vector<double> r1(probes.size()), r2(probes.size());
            parallel_for(probes.size(), opt.threads, [&](std::size_t i) {
                const auto& p = probes[i];
                r1[i] = residual_Lnu(sol, p.t, p.x, p.v, h, h);
                r2[i] = residual_Lnu(sol, p.t, p.x, p.v, h / 2, h / 2);
            });
            CsvTable csv({"t", "x", "v", "residual_h", "residual_h_half"});
            double w1 = 0.0, w2 = 0.0;
            for (std::size_t i = 0; i < probes.size(); ++i) {
                csv.add_row({probes[i].t, probes[i].x, probes[i].v, r1[i], r2[i]});
                w1 = std::max(w1, std::abs(r1[i]));
                w2 = std::max(w2, std::abs(r2[i]));
            }
            write(csv, "residual.csv");
            const double scale = std::abs(cfg.species.charge_over_mass()) * eq.max_abs_dF() * field.amplitude_bound();
            const double rel = ratio(w1, scale);
            check("pde_residual", within(w1, cfg.tol("residual"), scale), rel, cfg.tol("residual"),
                  "max |L f + (q/m) E F'| / (|q/m| sup|E| max|F'|) at h = " + format_double(h));
            if (w1 == 0.0) {
                check("fd_order", true, 0.0, cfg.tol("min_order"), "residual vanishes identically");
            } else {
                const double order = std::log2(w1 / w2);
                check("fd_order", order >= cfg.tol("min_order"), order, cfg.tol("min_order"),
                      "log2 of the residual ratio under h-halving");
            }
            report.summaries["max_residual_h"] = w1;
            report.summaries["max_residual_h_half"] = w2;
        });

        stage("solution", [&] {
            std::vector<double> f(probes.size());
            parallel_for(probes.size(), opt.threads, [&](std::size_t i) {
                f[i] = causal_f(sol, probes[i].t, probes[i].x, probes[i].v);
            });
            CsvTable csv({"t", "x", "v", "f"});
            double peak = 0.0;
            for (std::size_t i = 0; i < probes.size(); ++i) {
                csv.add_row({probes[i].t, probes[i].x, probes[i].v, f[i]});
                peak = std::max(peak, std::abs(f[i]));
            }
            write(csv, "solution.csv");
            report.summaries["max_abs_f"] = peak;
        });

        stage("current", [&] {
            const auto& lat = cfg.probes;
            const std::size_t nx = static_cast<std::size_t>(lat.x.count);
            std::vector<double> j(static_cast<std::size_t>(lat.t.count) * nx);
            parallel_for(j.size(), opt.threads, [&](std::size_t i) {
                j[i] = current_j(sol, lat.t.node(int(i / nx)), lat.x.node(int(i % nx)));
            });
            CsvTable csv({"t", "x", "j"});
            double peak = 0.0;
            for (std::size_t i = 0; i < j.size(); ++i) {
                csv.add_row({lat.t.node(int(i / nx)), lat.x.node(int(i % nx)), j[i]});
                peak = std::max(peak, std::abs(j[i]));
            }
            write(csv, "current.csv");
            report.summaries["max_abs_j"] = peak;
        });
    }

    void limiting_absorption() {
        const auto probes = cfg.probes.points();
        stage("nu_sweep", [&] {
            const auto r = nu_sweep_f(eq, cfg.field(), cfg.nu_sweep, probes, cfg.quadrature, cfg.tol("threshold"),
                                      cfg.tol("monotone"), opt.threads);
            CsvTable csv({"nu", "t", "x", "v", "f_value", "f_limit", "abs_err"});
            for (const auto& row : r.rows) csv.add_row({row.nu, row.t, row.x, row.v, row.f_value, row.f_limit, row.abs_err});
            write(csv, "nu_sweep.csv");
            std::string detail = "max |f_nu - f| per nu:";
            for (double e : r.max_error) detail += " " + format_double(e);
            check("monotone_decrease", r.monotone, 0.0, cfg.tol("monotone"), detail);
            const double rel = ratio(r.max_error.back(), r.max_abs_limit);
            check("final_error", r.final_below_threshold, rel, cfg.tol("threshold"),
                  "max |f_nu - f| / max |f| at the smallest nu");
            report.summaries["max_error"] = r.max_error;
            report.summaries["max_abs_f"] = r.max_abs_limit;
        });
    }

    std::vector<SymbolProbe> symbol_probes() const {
        std::vector<SymbolProbe> probes;
        for (double w : cfg.symbol_probes.omega)
            for (double k : cfg.symbol_probes.k) probes.push_back({w, k});
        std::mt19937_64 rng(cfg.seed);
        const auto& sp = cfg.symbol_probes;
        // explicit affine maps: distribution classes are not portable across
        // standard libraries
        auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * (double(rng() >> 11) * 0x1.0p-53); };
        for (int i = 0; i < sp.random_count; ++i) {
            const double w = uniform(-sp.random_omega_max, sp.random_omega_max);
            double k = 0.0;
            while (std::abs(k) < 1e-2) k = uniform(-sp.random_k_max, sp.random_k_max);
            probes.push_back({w, k});
        }
        return probes;
    }

    void conductivity_sweep() {
        const auto probes = symbol_probes();
        const double scale = conductivity_scale(eq);

        if (cfg.has_stage("symbol"))
            stage("symbol", [&] {
                const auto r = symbol_convergence_sweep(eq, probes, cfg.nu_sweep, cfg.tol("threshold"), {}, opt.threads);
                CsvTable csv({"omega", "k", "nu", "re_sigma", "im_sigma"});
                for (const auto& row : r.rows) csv.add_row({row.omega, row.k, row.nu, row.re_sigma, row.im_sigma});
                write(csv, "symbol.csv");
                double worst = 0.0;
                for (double v : r.final_relative) worst = std::max(worst, v);
                check("symbol_convergence", r.final_below_threshold, worst, cfg.tol("threshold"),
                      "max |sigma_nu - sigma_ph| / |sigma_ph| at the smallest nu");
                bool any_negative = false;
                for (const auto& p : probes) any_negative = any_negative || p.k < 0.0;
                if (any_negative) {
                    const double ratio_signed = ratio(r.negative_k_error_signed, r.negative_k_error_abs);
                    check("negative_k_abs_convention", r.negative_k_error_abs < cfg.tol("sign_abs"),
                          r.negative_k_error_abs, cfg.tol("sign_abs"), "relative error on k < 0 probes, |k| form");
                    check("negative_k_discrimination", ratio_signed > cfg.tol("sign_ratio"), ratio_signed,
                          cfg.tol("sign_ratio"), "error of the 1/k form over that of the |k| form on k < 0 probes");
                } else {
                    warn("negative_k_discrimination", "no probe with k < 0; sign check not exercised");
                }
                report.summaries["symbol_final_relative_max"] = worst;
            });

        if (cfg.has_stage("hilbert"))
            stage("hilbert", [&] {
                auto lorentz = [](double y) { return 1.0 / (1.0 + y * y); };
                auto gauss = [](double y) { return std::exp(-y * y); };
                CsvTable csv({"x", "hilbert_lorentzian", "exact_lorentzian", "hilbert_gaussian", "dawson_form"});
                double lor = 0.0, gau = 0.0;
                for (double x : {-3.0, -1.0, 0.5, 1.0, 2.0}) {
                    const double hl = hilbert(lorentz, x, PvIntegrandSpec{1e6, 1 << 22, 1e-9}).value;
                    const double hg = hilbert(gauss, x, PvIntegrandSpec::covering(x, 10.0)).value;
                    const double el = x / (1 + x * x), eg = 2.0 * dawson(x) / std::sqrt(pi);
                    lor = std::max(lor, std::abs(hl - el));
                    gau = std::max(gau, std::abs(hg - eg));
                    csv.add_row({x, hl, el, hg, eg});
                }
                write(csv, "hilbert.csv");
                const auto spec = PvIntegrandSpec::covering(20.0, 10.0, 96.0);
                const auto sym = hilbert_symbol_check(gauss, -20.0, 20.0, 1024, spec);
                const double l2 = hilbert_l2_ratio(gauss, -20.0, 20.0, 1024, spec);
                check("hilbert_lorentzian", lor < cfg.tol("hilbert_pair"), lor, cfg.tol("hilbert_pair"));
                check("hilbert_gaussian", gau < cfg.tol("hilbert_pair"), gau, cfg.tol("hilbert_pair"),
                      "against 2 D(x) / sqrt(pi), D the Dawson function");
                check("hilbert_symbol", sym.deviation < cfg.tol("hilbert_symbol"), sym.deviation, cfg.tol("hilbert_symbol"),
                      "max |H^ + i sign(xi) phi^| / max |phi^|");
                check("hilbert_l2", std::abs(l2 - 1.0) < cfg.tol("hilbert_l2"), std::abs(l2 - 1.0), cfg.tol("hilbert_l2"),
                      "| ||H phi|| / ||phi|| - 1 |");
                if (sym.truncation_warning) warn("hilbert_truncation", "window edge values above 1e-10 of the peak");
            });

        if (cfg.has_stage("sanity"))
            stage("sanity", [&] {
                const double k = 1.0, omega = cfg.tol("cold_phase_velocity") * k;
                const complex cold =
                    4.0 * pi * I * omega * symbol_sigma_ph(eq, omega, k) / cfg.species.plasma_frequency_squared();
                const double cold_dev = std::abs(cold - 1.0);
                check("cold_plasma_limit", cold_dev < cfg.tol("cold_plasma"), cold_dev, cfg.tol("cold_plasma"),
                      "|4 pi i omega sigma_ph / omega_p^2 - 1| at omega/k = " + format_double(omega / k) + "; value "
                          + format_double(cold.real()) + " + " + format_double(cold.imag()) + "i");

                std::vector<complex> s(probes.size()), sm(probes.size()), r(probes.size()), rm(probes.size());
                parallel_for(probes.size(), opt.threads, [&](std::size_t i) {
                    const auto& p = probes[i];
                    s[i] = symbol_sigma_ph(eq, p.omega, p.k);
                    sm[i] = symbol_sigma_ph(eq, -p.omega, -p.k);
                    r[i] = symbol_sigma_nu(eq, p.omega, p.k, 1e-2);
                    rm[i] = symbol_sigma_nu(eq, -p.omega, -p.k, 1e-2);
                });
                CsvTable csv({"omega", "k", "re_sigma_ph", "im_sigma_ph", "reality_defect"});
                double min_re = INFINITY, reality = 0.0;
                for (std::size_t i = 0; i < probes.size(); ++i) {
                    const double d1 = std::abs(sm[i] - std::conj(s[i])) / std::max(scale, std::abs(s[i]));
                    const double d2 = std::abs(rm[i] - std::conj(r[i])) / std::max(scale, std::abs(r[i]));
                    reality = std::max({reality, d1, d2});
                    min_re = std::min(min_re, s[i].real());
                    csv.add_row({probes[i].omega, probes[i].k, s[i].real(), s[i].imag(), std::max(d1, d2)});
                }
                write(csv, "sanity.csv");
                if (!probes.empty()) {
                    check("dissipation_sign", min_re >= cfg.tol("dissipation_floor") * scale, min_re,
                          cfg.tol("dissipation_floor") * scale, "min Re sigma_ph over probes");
                    check("reality", reality < cfg.tol("reality"), reality, cfg.tol("reality"),
                          "max |sigma(-omega,-k) - conj sigma(omega,k)|, for sigma_ph and sigma_nu at nu = 1e-2");
                }
            });
    }

    void multiplier_equivalence() {
        const auto field = cfg.field();
        const auto& grid = cfg.grid;
        const auto cutoff = make_cutoff(cfg.lambdas.front());
        MultiplierResult m;
        stage("multiplier", [&] {
            const auto symbol = ConductivitySymbol::limiting(eq, multiplier_table_range(grid, cutoff),
                                                             LandauConvention::absolute_k, opt.threads);
            m = apply_multiplier(field, symbol, cutoff, grid, opt.threads);
            CsvTable csv({"t", "x", "j"});
            for (int a = 0; a < grid.n_t; ++a)
                for (int b = 0; b < grid.n_x; ++b) csv.add_row({grid.t(a), grid.x(b), m.j(a, b)});
            write(csv, "multiplier.csv");
            check("imaginary_residue", m.imag_ratio <= cfg.tol("imag_ratio"), m.imag_ratio, cfg.tol("imag_ratio"),
                  "max |Im| / max |Re| of the inverse transform");
            if (m.truncation_warning)
                warn("window_truncation", "field or current at the window edge above 1e-6 of the peak (ratio "
                                              + format_double(m.edge_ratio) + ")");
        });
        stage("characteristics", [&] {
            const CausalSolution sol(0.0, eq, field, cfg.quadrature);
            const int a0 = grid.n_t / 4, a1 = 3 * grid.n_t / 4, b0 = grid.n_x / 4, b1 = 3 * grid.n_x / 4;
            const int nb = b1 - b0;
            std::vector<double> jc(static_cast<std::size_t>(a1 - a0) * nb);
            parallel_for(jc.size(), opt.threads, [&](std::size_t i) {
                jc[i] = current_j(sol, grid.t(a0 + int(i / nb)), grid.x(b0 + int(i % nb)));
            });
            CsvTable csv({"t", "x", "j_characteristics", "j_multiplier"});
            double diff = 0.0, peak = 0.0;
            for (std::size_t i = 0; i < jc.size(); ++i) {
                const int a = a0 + int(i / nb), b = b0 + int(i % nb);
                csv.add_row({grid.t(a), grid.x(b), jc[i], m.j(a, b)});
                peak = std::max(peak, std::abs(jc[i]));
                diff = std::max(diff, std::abs(m.j(a, b) - jc[i]));
            }
            write(csv, "characteristics.csv");
            const double rel = ratio(diff, peak);
            check("two_route", within(diff, cfg.tol("two_route"), peak) && std::isfinite(rel), rel, cfg.tol("two_route"),
                  "max |j_multiplier - j_characteristics| / max |j_characteristics| on the interior half-grid");
            report.summaries["max_abs_j"] = peak;
            report.summaries["max_abs_difference"] = diff;
        });
    }

    void model_problem() {
        const auto& src = cfg.source;
        stage("fourier_identity", [&] {
            const auto fi = fourier_identity_check(src, cfg.nu, cfg.grid, cfg.tol("noise_floor"));
            check("fourier_identity", fi.deviation < cfg.tol("fourier") || fi.deviation == 0.0, fi.deviation,
                  cfg.tol("fourier"), "max |u^ - i v^/(omega + i nu)| / max |i v^/(omega + i nu)| over "
                                          + std::to_string(fi.modes_compared) + " modes");
            if (fi.truncation_warning)
                warn("window_truncation", "solution at the window edge above 1e-6 of the peak (ratio "
                                              + format_double(fi.edge_ratio) + ")");
            report.summaries["fourier_modes_compared"] = fi.modes_compared;
        });
        stage("closed_form", [&] {
            std::vector<double> nus = cfg.nu_sweep.empty() ? std::vector<double>{cfg.nu} : cfg.nu_sweep;
            const auto& lat = cfg.probes;
            const std::size_t per_nu = static_cast<std::size_t>(lat.t.count) * lat.x.count;
            std::vector<double> closed(per_nu * nus.size()), quadr(per_nu * nus.size());
            parallel_for(closed.size(), opt.threads, [&](std::size_t i) {
                const double nu = nus[i / per_nu];
                const std::size_t r = i % per_nu;
                const double t = lat.t.node(int(r / lat.x.count)), x = lat.x.node(int(r % lat.x.count));
                closed[i] = causal_u(src, nu, t, x);
                quadr[i] = causal_u_quadrature(src, nu, t, x);
            });
            CsvTable csv({"nu", "t", "x", "u_closed_form", "u_quadrature", "rel_err"});
            double worst = 0.0;
            for (std::size_t i = 0; i < closed.size(); ++i) {
                const std::size_t r = i % per_nu;
                const double big = std::max(std::abs(closed[i]), std::abs(quadr[i]));
                const double rel = big == 0.0 ? 0.0 : std::abs(closed[i] - quadr[i]) / big;
                worst = std::max(worst, rel);
                csv.add_row({nus[i / per_nu], lat.t.node(int(r / lat.x.count)), lat.x.node(int(r % lat.x.count)),
                             closed[i], quadr[i], rel});
            }
            write(csv, "convergence.csv");
            check("erf_closed_form", worst < cfg.tol("erf"), worst, cfg.tol("erf"),
                  "max relative difference between the erf form and direct quadrature");
        });
        stage("uniqueness", [&] {
            const auto u = uniqueness_probe(src, cfg.nu, cfg.uniqueness.delta, cfg.uniqueness.horizon);
            check("tempered_uniqueness", u.relative_error < cfg.tol("growth"), u.relative_error, cfg.tol("growth"),
                  "growth of the solution difference over [-T, 0] against exp(nu T)");
            CsvTable csv({"t", "u_causal", "u_perturbed", "difference"});
            const int n = 64;
            for (int i = 0; i <= n; ++i) {
                const double t = -cfg.uniqueness.horizon * i / n;
                const double uc = causal_u(src, cfg.nu, t, 0.0);
                const double d = cfg.uniqueness.delta * std::exp(-cfg.nu * t);
                csv.add_row({t, uc, uc + d, d});
            }
            write(csv, "uniqueness.csv");
            report.summaries["growth_factor"] = u.growth_factor;
            report.summaries["expected_growth"] = u.expected_growth;
            report.summaries["backward_evolution_relative_error"] = u.evolved_relative_error;
        });
    }

    void remainder_decomposition() {
        const auto field = cfg.field();
        const auto psi = cfg.test_function.build();
        const std::size_t n = cfg.lambdas.size();
        std::vector<complex> mult(n), rem(n);
        stage("pairings", [&] {
            parallel_for(n, opt.threads, [&](std::size_t i) {
                const double lambda = cfg.lambdas[i];
                const auto cutoff = make_cutoff(lambda);
                const double reach = field.spectral_extent(PairingOptions{}.spectral_cut).omega_max * 2.0 * lambda + 1.0;
                const auto symbol = ConductivitySymbol::limiting(eq, reach);
                mult[i] = cutoff_multiplier_pairing(field, psi, cutoff, symbol);
                rem[i] = remainder_pairing(field, psi, cutoff, eq);
            });
            CsvTable csv({"lambda", "re_multiplier", "im_multiplier", "re_remainder", "im_remainder", "re_total", "im_total"});
            double worst = 0.0;
            const complex ref = mult[0] + rem[0];
            for (std::size_t i = 0; i < n; ++i) {
                const complex tot = mult[i] + rem[i];
                csv.add_row({cfg.lambdas[i], mult[i].real(), mult[i].imag(), rem[i].real(), rem[i].imag(), tot.real(),
                             tot.imag()});
                worst = std::max(worst, ratio(std::abs(tot - ref), std::abs(ref)));
            }
            write(csv, "pairing.csv");
            check("scale_independence", worst < cfg.tol("scale_independence") && std::isfinite(worst), worst,
                  cfg.tol("scale_independence"), "max relative spread of the total pairing across lambda");
            report.summaries["total_re"] = ref.real();
            report.summaries["total_im"] = ref.imag();
        });
    }
};

} // namespace detail

/// Run a validated configuration. Never throws for computation failures:
/// those end up in report.error.
inline RunReport run_scenario(const ScenarioConfig& cfg, const std::string& config_text, const RunOptions& opt) {
    RunReport report;
    report.scenario = to_string(cfg.scenario);
    report.config_hash = config_hash(config_text);
    try {
        std::filesystem::create_directories(opt.output_dir);
        detail::Runner r(cfg, opt, report);
        switch (cfg.scenario) {
        case Scenario::causal_solution: r.causal_solution(); break;
        case Scenario::limiting_absorption: r.limiting_absorption(); break;
        case Scenario::conductivity_sweep: r.conductivity_sweep(); break;
        case Scenario::multiplier_equivalence: r.multiplier_equivalence(); break;
        case Scenario::model_problem: r.model_problem(); break;
        case Scenario::remainder_decomposition: r.remainder_decomposition(); break;
        }
    } catch (const std::exception& e) {
        report.error = e.what();
    }
    return report;
}

inline void write_report(const RunReport& report, const std::string& output_dir) {
    std::filesystem::create_directories(output_dir);
    std::ofstream f(std::filesystem::path(output_dir) / "report.json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write report.json in " + output_dir);
    f << report.to_json().dump(2) << '\n';
}

} // namespace landau::app
