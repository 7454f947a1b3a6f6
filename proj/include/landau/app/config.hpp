#pragma once

// Scenario configuration: JSON text -> ScenarioConfig, with every problem
// collected as a diagnostic that names the field and its line.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "landau/app/csv.hpp"
#include "landau/causal.hpp"
#include "landau/conductivity.hpp"
#include "landau/kinetics.hpp"
#include "landau/model_problem.hpp"

namespace landau::app {

using json = nlohmann::json;

enum class Scenario {
    causal_solution,
    conductivity_sweep,
    limiting_absorption,
    multiplier_equivalence,
    model_problem,
    remainder_decomposition,
};

inline const std::map<std::string, Scenario>& scenario_names() {
    static const std::map<std::string, Scenario> names{
        {"causal-solution", Scenario::causal_solution},
        {"conductivity-sweep", Scenario::conductivity_sweep},
        {"limiting-absorption", Scenario::limiting_absorption},
        {"multiplier-equivalence", Scenario::multiplier_equivalence},
        {"model-problem", Scenario::model_problem},
        {"remainder-decomposition", Scenario::remainder_decomposition},
    };
    return names;
}

inline std::string to_string(Scenario s) {
    for (const auto& [name, value] : scenario_names())
        if (value == s) return name;
    return "unknown";
}

struct Diagnostic {
    std::string field; // JSON pointer, "" for the document
    int line = 0;
    std::string message;

    std::string str() const {
        std::string out = "line " + std::to_string(line) + ": ";
        if (!field.empty()) out += field + ": ";
        return out + message;
    }
};

struct LatticeAxis {
    double min = 0.0;
    double max = 0.0;
    int count = 1;

    double node(int i) const { return count == 1 ? min : min + (max - min) * i / (count - 1); }
};

struct ProbeLattice {
    LatticeAxis t, x, v;

    std::vector<ProbePoint> points() const {
        std::vector<ProbePoint> out;
        for (int a = 0; a < t.count; ++a)
            for (int b = 0; b < x.count; ++b)
                for (int c = 0; c < v.count; ++c) out.push_back({t.node(a), x.node(b), v.node(c)});
        return out;
    }
};

struct SymbolProbeSpec {
    std::vector<double> omega;
    std::vector<double> k;
    int random_count = 0;
    double random_omega_max = 10.0;
    double random_k_max = 5.0;
};

struct TestFunctionSpec {
    double omega0 = 0.5;
    double k0 = 0.3;
    double width = 1.0;

    SpectralTestFunction build() const {
        const double w0 = omega0, c0 = k0, s = width;
        return [w0, c0, s](double omega, double k) {
            const double a = (omega - w0) / s, b = (k - c0) / s;
            return complex(std::exp(-a * a - b * b));
        };
    }
};

struct UniquenessSpec {
    double delta = 1.0;
    double horizon = 10.0;
};

/// Per-scenario check limits. Names and defaults live in default_tolerances().
using Tolerances = std::map<std::string, double>;

inline Tolerances default_tolerances(Scenario s) {
    switch (s) {
    case Scenario::causal_solution: return {{"residual", 1e-5}, {"min_order", 1.9}, {"h", 1e-3}};
    case Scenario::limiting_absorption: return {{"threshold", 1e-3}, {"monotone", 1e-9}};
    case Scenario::conductivity_sweep:
        return {{"threshold", 5e-3},      {"sign_ratio", 10.0},    {"sign_abs", 1e-2},
                {"hilbert_pair", 1e-6},   {"hilbert_symbol", 1e-4}, {"hilbert_l2", 1e-3},
                {"cold_plasma", 1e-2},    {"cold_phase_velocity", 8.0}, {"dissipation_floor", -1e-12},
                {"reality", 1e-10}};
    case Scenario::multiplier_equivalence: return {{"two_route", 1e-3}, {"imag_ratio", 1e-10}};
    case Scenario::model_problem:
        return {{"fourier", 1e-6}, {"erf", 1e-10}, {"growth", 1e-10}, {"noise_floor", 1e-10}};
    case Scenario::remainder_decomposition: return {{"scale_independence", 1e-4}};
    }
    return {};
}

struct ScenarioConfig {
    Scenario scenario = Scenario::causal_solution;
    PlasmaSpecies species{};
    std::vector<std::pair<double, Packet>> field_terms;
    FieldKind field_kind = FieldKind::gaussian_packet;
    SpaceTimeGrid grid{};
    double nu = 0.0;
    std::vector<double> nu_sweep;
    std::vector<double> lambdas;
    ProbeLattice probes{};
    SymbolProbeSpec symbol_probes{};
    ScalarSource source{};
    UniquenessSpec uniqueness{};
    TestFunctionSpec test_function{};
    QuadratureSpec quadrature{};
    Tolerances tolerances;
    std::vector<std::string> stages; // conductivity-sweep: subset of symbol, hilbert, sanity
    std::string output_dir;
    std::uint64_t seed = 1;

    bool has_stage(const std::string& name) const {
        return std::find(stages.begin(), stages.end(), name) != stages.end();
    }

    FieldPerturbation field() const {
        if (field_terms.size() == 1 && field_kind != FieldKind::superposition) {
            const Packet& p = field_terms[0].second;
            if (field_kind == FieldKind::gaussian_packet)
                return FieldPerturbation::gaussian_packet(field_terms[0].first * p.amplitude, p.t0, p.x0, p.tau, p.ell);
            return FieldPerturbation::modulated_packet(field_terms[0].first * p.amplitude, p.t0, p.x0, p.tau, p.ell,
                                                       p.omega0, p.k0);
        }
        std::vector<std::pair<double, FieldPerturbation>> terms;
        for (const auto& [c, p] : field_terms)
            terms.emplace_back(c, FieldPerturbation::modulated_packet(p.amplitude, p.t0, p.x0, p.tau, p.ell, p.omega0, p.k0));
        return FieldPerturbation::superposition(terms);
    }

    double tol(const std::string& name) const { return tolerances.at(name); }
};

struct ParseResult {
    std::optional<ScenarioConfig> config;
    std::vector<Diagnostic> diagnostics;
    bool syntax_error = false;
    bool ok() const { return config.has_value() && diagnostics.empty(); }
};

namespace detail {

/// Line of the key at a JSON pointer, found by walking the raw text key by
/// key. Falls back to the deepest key that was found.
inline int locate(const std::string& text, const std::string& pointer) {
    std::size_t pos = 0;
    std::stringstream ss(pointer);
    std::string seg;
    std::getline(ss, seg, '/'); // leading empty segment
    while (std::getline(ss, seg, '/')) {
        if (!seg.empty() && std::all_of(seg.begin(), seg.end(), ::isdigit)) continue;
        const std::string token = "\"" + seg + "\"";
        std::size_t at = pos;
        bool found = false;
        while ((at = text.find(token, at)) != std::string::npos) {
            std::size_t after = at + token.size();
            while (after < text.size() && std::isspace(static_cast<unsigned char>(text[after]))) ++after;
            if (after < text.size() && text[after] == ':') {
                found = true;
                break;
            }
            at += token.size();
        }
        if (!found) break;
        pos = at;
    }
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

class Reader {
public:
    Reader(const std::string& text, std::vector<Diagnostic>& out) : text_(text), out_(out) {}

    void error(const std::string& pointer, const std::string& message) {
        out_.push_back({pointer, locate(text_, pointer), message});
    }

    /// Flags keys of `obj` outside `allowed`.
    void only(const json& obj, const std::string& pointer, std::initializer_list<const char*> allowed,
              const std::string& context = "") {
        if (!obj.is_object()) return;
        std::set<std::string> keys(allowed.begin(), allowed.end());
        for (auto it = obj.begin(); it != obj.end(); ++it)
            if (!keys.count(it.key()))
                error(pointer + "/" + it.key(), context.empty() ? "unknown key" : "unknown key " + context);
    }

    const json* object(const json& parent, const std::string& pointer, const char* key, bool required) {
        const std::string p = pointer + "/" + key;
        if (!parent.contains(key)) {
            if (required) error(p, "required section is missing");
            return nullptr;
        }
        const json& j = parent.at(key);
        if (!j.is_object()) {
            error(p, "must be an object");
            return nullptr;
        }
        return &j;
    }

    std::optional<double> number(const json& parent, const std::string& pointer, const char* key, bool required) {
        const std::string p = pointer + "/" + key;
        if (!parent.contains(key)) {
            if (required) error(p, "required value is missing");
            return std::nullopt;
        }
        const json& j = parent.at(key);
        if (!j.is_number()) {
            error(p, "must be a number");
            return std::nullopt;
        }
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            error(p, "must be finite");
            return std::nullopt;
        }
        return v;
    }

    void number_into(const json& parent, const std::string& pointer, const char* key, double& dst,
                     bool required = false) {
        if (auto v = number(parent, pointer, key, required)) dst = *v;
    }

    std::optional<long long> integer(const json& parent, const std::string& pointer, const char* key, bool required) {
        const std::string p = pointer + "/" + key;
        if (!parent.contains(key)) {
            if (required) error(p, "required value is missing");
            return std::nullopt;
        }
        const json& j = parent.at(key);
        if (!j.is_number_integer()) {
            error(p, "must be an integer");
            return std::nullopt;
        }
        return j.get<long long>();
    }

    std::optional<std::vector<double>> numbers(const json& parent, const std::string& pointer, const char* key,
                                               bool required, bool allow_scalar = false) {
        const std::string p = pointer + "/" + key;
        if (!parent.contains(key)) {
            if (required) error(p, "required list is missing");
            return std::nullopt;
        }
        const json& j = parent.at(key);
        if (allow_scalar && j.is_number()) return std::vector<double>{j.get<double>()};
        if (!j.is_array()) {
            error(p, allow_scalar ? "must be a number or a list of numbers" : "must be a list of numbers");
            return std::nullopt;
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_number()) {
                error(p + "/" + std::to_string(i), "must be a number");
                return std::nullopt;
            }
            out.push_back(j[i].get<double>());
        }
        return out;
    }

private:
    const std::string& text_;
    std::vector<Diagnostic>& out_;
};

inline bool uses(Scenario s, const std::string& key) {
    static const std::map<std::string, std::set<Scenario>> table{
        {"field",
         {Scenario::causal_solution, Scenario::limiting_absorption, Scenario::multiplier_equivalence,
          Scenario::remainder_decomposition}},
        {"grid", {Scenario::multiplier_equivalence, Scenario::model_problem}},
        {"nu", {Scenario::causal_solution, Scenario::model_problem}},
        {"nu_sweep", {Scenario::limiting_absorption, Scenario::conductivity_sweep, Scenario::model_problem}},
        {"lambda", {Scenario::multiplier_equivalence, Scenario::remainder_decomposition}},
        {"probes", {Scenario::causal_solution, Scenario::limiting_absorption, Scenario::model_problem}},
        {"symbol_probes", {Scenario::conductivity_sweep}},
        {"stages", {Scenario::conductivity_sweep}},
        {"source", {Scenario::model_problem}},
        {"uniqueness", {Scenario::model_problem}},
        {"test_function", {Scenario::remainder_decomposition}},
        {"quadrature",
         {Scenario::causal_solution, Scenario::limiting_absorption, Scenario::multiplier_equivalence}},
    };
    auto it = table.find(key);
    return it == table.end() || it->second.count(s) > 0;
}

inline bool required(Scenario s, const std::string& key) {
    switch (s) {
    case Scenario::causal_solution: return key == "field" || key == "nu" || key == "probes";
    case Scenario::limiting_absorption: return key == "field" || key == "nu_sweep" || key == "probes";
    case Scenario::conductivity_sweep: return false; // depends on the selected stages
    case Scenario::multiplier_equivalence: return key == "field" || key == "grid" || key == "lambda";
    case Scenario::model_problem:
        return key == "source" || key == "nu" || key == "grid" || key == "uniqueness";
    case Scenario::remainder_decomposition: return key == "field" || key == "lambda" || key == "test_function";
    }
    return false;
}

inline void read_packet(Reader& r, const json& j, const std::string& p, FieldKind kind, Packet& out) {
    r.number_into(j, p, "amplitude", out.amplitude, true);
    r.number_into(j, p, "t0", out.t0);
    r.number_into(j, p, "x0", out.x0);
    r.number_into(j, p, "tau", out.tau, true);
    r.number_into(j, p, "ell", out.ell, true);
    if (kind == FieldKind::modulated_packet) {
        r.number_into(j, p, "omega0", out.omega0);
        r.number_into(j, p, "k0", out.k0);
        r.only(j, p, {"kind", "amplitude", "t0", "x0", "tau", "ell", "omega0", "k0", "coefficient"});
    } else {
        r.only(j, p, {"kind", "amplitude", "t0", "x0", "tau", "ell", "coefficient"});
    }
    if (!(out.tau > 0.0)) r.error(p + "/tau", "packet width tau must be positive");
    if (!(out.ell > 0.0)) r.error(p + "/ell", "packet width ell must be positive");
}

inline std::optional<FieldKind> packet_kind(Reader& r, const json& j, const std::string& p, bool allow_superposition) {
    if (!j.contains("kind") || !j.at("kind").is_string()) {
        r.error(p + "/kind", "required string: gaussian-packet, modulated-packet or superposition");
        return std::nullopt;
    }
    const std::string k = j.at("kind").get<std::string>();
    if (k == "gaussian-packet") return FieldKind::gaussian_packet;
    if (k == "modulated-packet") return FieldKind::modulated_packet;
    if (k == "superposition" && allow_superposition) return FieldKind::superposition;
    r.error(p + "/kind", "unsupported field kind '" + k + "'");
    return std::nullopt;
}

inline void read_field(Reader& r, const json& j, const std::string& p, ScenarioConfig& c) {
    const auto kind = packet_kind(r, j, p, true);
    if (!kind) return;
    c.field_kind = *kind;
    if (*kind != FieldKind::superposition) {
        Packet pk;
        read_packet(r, j, p, *kind, pk);
        c.field_terms = {{1.0, pk}};
        return;
    }
    r.only(j, p, {"kind", "terms"});
    if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty()) {
        r.error(p + "/terms", "superposition needs a non-empty list of terms");
        return;
    }
    const json& terms = j.at("terms");
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = p + "/terms/" + std::to_string(i);
        if (!terms[i].is_object()) {
            r.error(tp, "must be an object");
            continue;
        }
        const auto k = packet_kind(r, terms[i], tp, false);
        if (!k) continue;
        Packet pk;
        read_packet(r, terms[i], tp, *k, pk);
        double coefficient = 1.0;
        r.number_into(terms[i], tp, "coefficient", coefficient);
        c.field_terms.emplace_back(coefficient, pk);
    }
}

inline void read_axis(Reader& r, const json& parent, const std::string& p, const char* key, LatticeAxis& axis) {
    const json* j = r.object(parent, p, key, true);
    if (!j) return;
    const std::string ap = p + "/" + key;
    r.only(*j, ap, {"min", "max", "count"});
    r.number_into(*j, ap, "min", axis.min, true);
    r.number_into(*j, ap, "max", axis.max, true);
    if (auto n = r.integer(*j, ap, "count", true)) {
        if (*n < 1 || *n > 100000)
            r.error(ap + "/count", "must be between 1 and 100000");
        else
            axis.count = static_cast<int>(*n);
    }
    if (axis.max < axis.min) r.error(ap + "/max", "must not be below min");
}

} // namespace detail

/// Parse and validate. Diagnostics are accumulated, never thrown.
inline ParseResult parse_config(const std::string& text) {
    ParseResult result;
    auto& diags = result.diagnostics;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t at = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(at), '\n'));
        const std::size_t nl = text.rfind('\n', at == 0 ? 0 : at - 1);
        const std::size_t col = nl == std::string::npos ? at + 1 : at - nl;
        diags.push_back({"", line, "syntax error at column " + std::to_string(col) + ": " + e.what()});
        result.syntax_error = true;
        return result;
    }
    detail::Reader r(text, diags);
    if (!doc.is_object()) {
        diags.push_back({"", 1, "top level must be an object"});
        return result;
    }

    ScenarioConfig c;
    if (!doc.contains("scenario") || !doc.at("scenario").is_string()) {
        r.error("/scenario", "required string naming the scenario");
        return result;
    }
    {
        const std::string name = doc.at("scenario").get<std::string>();
        auto it = scenario_names().find(name);
        if (it == scenario_names().end()) {
            std::string known;
            for (const auto& [n, s] : scenario_names()) known += (known.empty() ? "" : ", ") + n;
            r.error("/scenario", "unknown scenario '" + name + "' (expected one of: " + known + ")");
            return result;
        }
        c.scenario = it->second;
    }
    const Scenario s = c.scenario;
    c.tolerances = default_tolerances(s);
    c.output_dir = "out/" + to_string(s);

    static const std::set<std::string> top{"scenario", "species",    "field",         "grid",       "nu",
                                           "nu_sweep", "lambda",     "probes",        "symbol_probes",
                                           "source",   "uniqueness", "test_function", "quadrature", "tolerances",
                                           "stages",   "output_dir", "seed"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (!top.count(it.key()))
            r.error("/" + it.key(), "unknown key");
        else if (!detail::uses(s, it.key()))
            r.error("/" + it.key(), "not used by scenario '" + to_string(s) + "'");
    }
    for (const char* key : {"field", "grid", "nu", "nu_sweep", "lambda", "probes", "symbol_probes", "source",
                            "uniqueness", "test_function"})
        if (detail::required(s, key) && !doc.contains(key)) r.error(std::string("/") + key, "required for scenario '" + to_string(s) + "'");

    if (const json* sp = r.object(doc, "", "species", false)) {
        r.only(*sp, "/species", {"charge", "mass", "density", "thermal_speed"});
        r.number_into(*sp, "/species", "charge", c.species.charge);
        r.number_into(*sp, "/species", "mass", c.species.mass);
        r.number_into(*sp, "/species", "density", c.species.density);
        r.number_into(*sp, "/species", "thermal_speed", c.species.thermal_speed);
        if (!(c.species.mass > 0.0)) r.error("/species/mass", "must be positive");
        if (!(c.species.density > 0.0)) r.error("/species/density", "must be positive");
        if (!(c.species.thermal_speed > 0.0)) r.error("/species/thermal_speed", "must be positive");
    }

    if (detail::uses(s, "field"))
        if (const json* f = r.object(doc, "", "field", false)) detail::read_field(r, *f, "/field", c);

    if (detail::uses(s, "grid"))
        if (const json* g = r.object(doc, "", "grid", false)) {
            r.only(*g, "/grid", {"t_min", "t_max", "n_t", "x_min", "x_max", "n_x"});
            r.number_into(*g, "/grid", "t_min", c.grid.t_min);
            r.number_into(*g, "/grid", "t_max", c.grid.t_max);
            r.number_into(*g, "/grid", "x_min", c.grid.x_min);
            r.number_into(*g, "/grid", "x_max", c.grid.x_max);
            for (const char* key : {"n_t", "n_x"})
                if (auto n = r.integer(*g, "/grid", key, false)) {
                    if (!is_power_of_two(*n) || *n < 4 || *n > (1 << 14))
                        r.error(std::string("/grid/") + key, "must be a power of two between 4 and 16384");
                    else
                        (std::string(key) == "n_t" ? c.grid.n_t : c.grid.n_x) = static_cast<int>(*n);
                }
            if (!(c.grid.t_max > c.grid.t_min)) r.error("/grid/t_max", "must exceed t_min");
            if (!(c.grid.x_max > c.grid.x_min)) r.error("/grid/x_max", "must exceed x_min");
        }

    if (detail::uses(s, "nu"))
        if (auto nu = r.number(doc, "", "nu", false)) {
            c.nu = *nu;
            if (s == Scenario::model_problem && !(c.nu > 0.0))
                r.error("/nu", "must be positive: the regularized problem requires nu > 0");
            else if (!(c.nu >= 0.0))
                r.error("/nu", "must be non-negative (nu = 0 is the causal limit)");
        }

    if (detail::uses(s, "nu_sweep"))
        if (auto sweep = r.numbers(doc, "", "nu_sweep", false)) {
            c.nu_sweep = *sweep;
            if (c.nu_sweep.empty()) r.error("/nu_sweep", "must not be empty");
            for (std::size_t i = 0; i < c.nu_sweep.size(); ++i) {
                const double nu = c.nu_sweep[i];
                const bool trailing_zero = s == Scenario::limiting_absorption && nu == 0.0 && i + 1 == c.nu_sweep.size() && i > 0;
                if (!(nu > 0.0) && !trailing_zero)
                    r.error("/nu_sweep/" + std::to_string(i),
                            "value " + format_double(nu) + " violates nu > 0, the precondition of the regularized problem");
                if (i > 0 && !(nu < c.nu_sweep[i - 1]))
                    r.error("/nu_sweep/" + std::to_string(i), "sweep must be strictly decreasing");
            }
        }

    if (detail::uses(s, "lambda"))
        if (auto l = r.numbers(doc, "", "lambda", false, true)) {
            c.lambdas = *l;
            for (std::size_t i = 0; i < c.lambdas.size(); ++i)
                if (!(c.lambdas[i] > 0.0)) r.error("/lambda", "cutoff scale must be positive");
            if (s == Scenario::remainder_decomposition && c.lambdas.size() < 2)
                r.error("/lambda", "needs at least two scales to compare");
            if (s == Scenario::multiplier_equivalence && c.lambdas.size() != 1)
                r.error("/lambda", "needs exactly one scale");
        }

    if (detail::uses(s, "probes"))
        if (const json* p = r.object(doc, "", "probes", false)) {
            r.only(*p, "/probes", {"t", "x", "v"});
            detail::read_axis(r, *p, "/probes", "t", c.probes.t);
            detail::read_axis(r, *p, "/probes", "x", c.probes.x);
            if (s == Scenario::model_problem) {
                if (p->contains("v")) r.error("/probes/v", "the model problem has no velocity variable");
            } else {
                detail::read_axis(r, *p, "/probes", "v", c.probes.v);
            }
        }

    if (detail::uses(s, "symbol_probes"))
        if (const json* p = r.object(doc, "", "symbol_probes", false)) {
            r.only(*p, "/symbol_probes", {"omega", "k", "random"});
            if (auto w = r.numbers(*p, "/symbol_probes", "omega", true)) c.symbol_probes.omega = *w;
            if (auto k = r.numbers(*p, "/symbol_probes", "k", true)) {
                c.symbol_probes.k = *k;
                for (std::size_t i = 0; i < k->size(); ++i)
                    if ((*k)[i] == 0.0)
                        r.error("/symbol_probes/k/" + std::to_string(i), "k = 0 is outside the limiting symbol's domain");
            }
            if (const json* rnd = r.object(*p, "/symbol_probes", "random", false)) {
                const std::string rp = "/symbol_probes/random";
                r.only(*rnd, rp, {"count", "omega_max", "k_max"});
                if (auto n = r.integer(*rnd, rp, "count", true)) {
                    if (*n < 0 || *n > 100000)
                        r.error(rp + "/count", "must be between 0 and 100000");
                    else
                        c.symbol_probes.random_count = static_cast<int>(*n);
                }
                r.number_into(*rnd, rp, "omega_max", c.symbol_probes.random_omega_max);
                r.number_into(*rnd, rp, "k_max", c.symbol_probes.random_k_max);
                if (!(c.symbol_probes.random_k_max > 0.01)) r.error(rp + "/k_max", "must exceed 0.01");
            }
        }

    if (detail::uses(s, "source"))
        if (const json* p = r.object(doc, "", "source", false)) {
            r.only(*p, "/source", {"amplitude", "t0", "x0", "tau", "ell"});
            r.number_into(*p, "/source", "amplitude", c.source.amplitude, true);
            r.number_into(*p, "/source", "t0", c.source.t0);
            r.number_into(*p, "/source", "x0", c.source.x0);
            r.number_into(*p, "/source", "tau", c.source.tau);
            r.number_into(*p, "/source", "ell", c.source.ell);
            if (!(c.source.tau > 0.0)) r.error("/source/tau", "must be positive");
            if (!(c.source.ell > 0.0)) r.error("/source/ell", "must be positive");
        }

    if (detail::uses(s, "uniqueness"))
        if (const json* p = r.object(doc, "", "uniqueness", false)) {
            r.only(*p, "/uniqueness", {"delta", "horizon"});
            r.number_into(*p, "/uniqueness", "delta", c.uniqueness.delta, true);
            r.number_into(*p, "/uniqueness", "horizon", c.uniqueness.horizon, true);
            if (!(c.uniqueness.horizon > 0.0)) r.error("/uniqueness/horizon", "must be positive");
        }

    if (detail::uses(s, "test_function"))
        if (const json* p = r.object(doc, "", "test_function", false)) {
            r.only(*p, "/test_function", {"omega0", "k0", "width"});
            r.number_into(*p, "/test_function", "omega0", c.test_function.omega0);
            r.number_into(*p, "/test_function", "k0", c.test_function.k0);
            r.number_into(*p, "/test_function", "width", c.test_function.width);
            if (!(c.test_function.width > 0.0)) r.error("/test_function/width", "must be positive");
        }

    if (detail::uses(s, "quadrature"))
        if (const json* p = r.object(doc, "", "quadrature", false)) {
            const std::string qp = "/quadrature";
            r.only(*p, qp, {"abs_tol", "rel_tol", "max_subdivisions", "tail_cut", "n_v", "n_v_max", "velocity_rel_tol"});
            auto& q = c.quadrature;
            r.number_into(*p, qp, "abs_tol", q.abs_tol);
            r.number_into(*p, qp, "rel_tol", q.rel_tol);
            r.number_into(*p, qp, "tail_cut", q.tail_cut);
            r.number_into(*p, qp, "velocity_rel_tol", q.velocity_rel_tol);
            if (auto n = r.integer(*p, qp, "max_subdivisions", false)) q.max_subdivisions = static_cast<int>(std::clamp<long long>(*n, -1, 1 << 24));
            if (auto n = r.integer(*p, qp, "n_v", false)) q.n_v = static_cast<int>(std::clamp<long long>(*n, -1, 1 << 24));
            if (auto n = r.integer(*p, qp, "n_v_max", false)) q.n_v_max = static_cast<int>(std::clamp<long long>(*n, -1, 1 << 24));
            try {
                q.validate();
            } catch (const InvalidParameter& e) {
                r.error(qp, e.what());
            }
        }

    if (const json* p = r.object(doc, "", "tolerances", false)) {
        for (auto it = p->begin(); it != p->end(); ++it) {
            const std::string tp = "/tolerances/" + it.key();
            auto known = c.tolerances.find(it.key());
            if (known == c.tolerances.end()) {
                std::string names;
                for (const auto& [n, v] : c.tolerances) names += (names.empty() ? "" : ", ") + n;
                r.error(tp, "unknown tolerance for scenario '" + to_string(s) + "' (known: " + names + ")");
                continue;
            }
            if (!it.value().is_number()) {
                r.error(tp, "must be a number");
                continue;
            }
            const double v = it.value().get<double>();
            if (it.key() != "dissipation_floor" && !(v > 0.0)) r.error(tp, "must be positive");
            known->second = v;
        }
    }

    if (s == Scenario::conductivity_sweep) {
        const std::vector<std::string> known{"symbol", "hilbert", "sanity"};
        c.stages = known;
        if (doc.contains("stages")) {
            const json& st = doc.at("stages");
            c.stages.clear();
            if (!st.is_array() || st.empty()) {
                r.error("/stages", "must be a non-empty list of stage names");
            } else {
                for (std::size_t i = 0; i < st.size(); ++i) {
                    const std::string sp = "/stages/" + std::to_string(i);
                    if (!st[i].is_string() || std::find(known.begin(), known.end(), st[i].get<std::string>()) == known.end())
                        r.error(sp, "unknown stage (expected symbol, hilbert or sanity)");
                    else if (c.has_stage(st[i].get<std::string>()))
                        r.error(sp, "stage listed twice");
                    else
                        c.stages.push_back(st[i].get<std::string>());
                }
            }
        }
        if (c.has_stage("symbol") && !doc.contains("nu_sweep")) r.error("/nu_sweep", "required by the symbol stage");
        if ((c.has_stage("symbol") || c.has_stage("sanity")) && !doc.contains("symbol_probes"))
            r.error("/symbol_probes", "required by the symbol and sanity stages");
    }

    if (doc.contains("output_dir")) {
        if (!doc.at("output_dir").is_string() || doc.at("output_dir").get<std::string>().empty())
            r.error("/output_dir", "must be a non-empty string");
        else
            c.output_dir = doc.at("output_dir").get<std::string>();
    }
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned())
            r.error("/seed", "must be a non-negative integer");
        else
            c.seed = doc.at("seed").get<std::uint64_t>();
    }

    // cross-field checks
    if (s == Scenario::multiplier_equivalence && diags.empty()) {
        const auto field = c.field();
        const SpectralExtent ext = field.spectral_extent(1e-12);
        const SpectralGrid sg(c.grid);
        if (ext.omega_max >= sg.omega_nyquist() || ext.k_max >= sg.k_nyquist())
            r.error("/grid", "Nyquist frequencies (" + format_double(sg.omega_nyquist()) + ", "
                                 + format_double(sg.k_nyquist()) + ") do not cover the field spectrum ("
                                 + format_double(ext.omega_max) + ", " + format_double(ext.k_max) + ")");
    }

    result.config = c;
    return result;
}

inline ParseResult load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        ParseResult r;
        r.diagnostics.push_back({"", 0, "cannot read config file '" + path + "'"});
        r.syntax_error = true;
        return r;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

/// FNV-1a 64 of the config bytes, as 16 hex digits.
inline std::string config_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace landau::app
