// landau: scenario runner.
//
//   landau run <config.json> [--output-dir DIR] [--threads N] [--quiet]
//   landau validate <config.json>
//
// Exit codes: 0 all checks pass (warnings allowed), 1 a check failed or the
// computation threw, 2 the command line or the config is invalid.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "landau/app/config.hpp"
#include "landau/app/scenarios.hpp"

namespace {

constexpr int exit_ok = 0, exit_failed = 1, exit_invalid = 2;

struct Loaded {
    std::string text;
    landau::app::ParseResult parsed;
};

Loaded load(const std::string& path) {
    Loaded l;
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        l.parsed.diagnostics.push_back({"", 0, "cannot read config file '" + path + "'"});
        return l;
    }
    std::stringstream ss;
    ss << f.rdbuf();
    l.text = ss.str();
    l.parsed = landau::app::parse_config(l.text);
    return l;
}

void print_diagnostics(const std::string& path, const landau::app::ParseResult& r) {
    for (const auto& d : r.diagnostics) std::fprintf(stderr, "%s:%s\n", path.c_str(), d.str().c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal linearized Vlasov solutions, plasma conductivity and their checks"};
    app.require_subcommand(1);

    std::string config_path, output_dir;
    unsigned threads = 1;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "run a scenario and write artifacts plus report.json");
    run->add_option("config", config_path, "scenario config (JSON)")->required();
    run->add_option("--output-dir", output_dir, "artifact directory (overrides LANDAU_OUTPUT_DIR and the config)");
    run->add_option("--threads", threads, "worker threads, 0 = hardware concurrency")->check(CLI::Range(0u, 1024u));
    run->add_flag("--quiet", quiet, "print only failures");

    auto* validate = app.add_subcommand("validate", "validate a config without computing anything");
    validate->add_option("config", config_path, "scenario config (JSON)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_invalid;
    }

    const Loaded loaded = load(config_path);
    if (!loaded.parsed.ok()) {
        print_diagnostics(config_path, loaded.parsed);
        std::fprintf(stderr, "%zu problem(s) found\n", loaded.parsed.diagnostics.size());
        return exit_invalid;
    }
    const auto& cfg = *loaded.parsed.config;

    if (validate->parsed()) {
        std::printf("%s: valid %s config\n", config_path.c_str(), landau::app::to_string(cfg.scenario).c_str());
        return exit_ok;
    }

    landau::app::RunOptions opt;
    if (!output_dir.empty())
        opt.output_dir = output_dir;
    else if (const char* env = std::getenv("LANDAU_OUTPUT_DIR"); env && *env)
        opt.output_dir = env;
    else
        opt.output_dir = cfg.output_dir;
    opt.threads = threads;
    if (!quiet) opt.log = [](const std::string& line) { std::printf("%s\n", line.c_str()); std::fflush(stdout); };

    const auto report = landau::app::run_scenario(cfg, loaded.text, opt);
    try {
        landau::app::write_report(report, opt.output_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_failed;
    }

    for (const auto& c : report.checks) {
        if (quiet && c.status != landau::app::Status::fail) continue;
        std::printf("[%s] %s: %s (limit %s)%s%s\n", landau::app::to_string(c.status).c_str(), c.name.c_str(),
                    landau::app::format_double(c.value).c_str(), landau::app::format_double(c.limit).c_str(),
                    c.detail.empty() ? "" : "; ", c.detail.c_str());
    }
    if (!report.error.empty()) std::fprintf(stderr, "error: %s\n", report.error.c_str());
    if (!quiet || report.exit_code() != 0)
        std::printf("%s: %s (report in %s/report.json)\n", report.scenario.c_str(),
                    landau::app::to_string(report.status()).c_str(), opt.output_dir.c_str());
    return report.exit_code() == 0 ? exit_ok : exit_failed;
}
