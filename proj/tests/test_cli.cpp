#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "landau/app/config.hpp"
#include "landau/app/scenarios.hpp"

using namespace landau::app;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("landau_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

const std::string causal_text = R"({
  "scenario": "causal-solution",
  "field": {"kind": "gaussian-packet", "amplitude": 1.0, "tau": 1.0, "ell": 1.0},
  "nu": 0.1,
  "probes": {
    "t": {"min": -1.0, "max": 1.0, "count": 2},
    "x": {"min": -1.0, "max": 1.0, "count": 2},
    "v": {"min": -2.0, "max": 2.0, "count": 3}
  }
})";

ScenarioConfig parse_ok(const std::string& text) {
    const auto r = parse_config(text);
    for (const auto& d : r.diagnostics) ADD_FAILURE() << d.str();
    EXPECT_TRUE(r.ok());
    return r.config.value_or(ScenarioConfig{});
}

RunReport run_in(const ScenarioConfig& c, const std::string& text, const fs::path& dir, unsigned threads = 1) {
    RunOptions o;
    o.output_dir = dir.string();
    o.threads = threads;
    return run_scenario(c, text, o);
}

int shell(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

// ---------------------------------------------------------------------------
// validation

TEST(Config, ReferenceConfigsAreValid) {
    for (const auto& entry : fs::directory_iterator(LANDAU_CONFIG_DIR)) {
        if (entry.path().extension() != ".json") continue;
        const auto r = parse_config(slurp(entry.path()));
        EXPECT_TRUE(r.ok()) << entry.path();
        for (const auto& d : r.diagnostics) ADD_FAILURE() << entry.path() << ": " << d.str();
    }
}

TEST(Config, NonPowerOfTwoGridNamesTheField) {
    const std::string text = R"({
  "scenario": "model-problem",
  "source": {"amplitude": 1.0},
  "nu": 0.5,
  "grid": {"n_t": 500, "n_x": 512},
  "uniqueness": {"delta": 1.0, "horizon": 10.0}
})";
    const auto r = parse_config(text);
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].field, "/grid/n_t");
    EXPECT_EQ(r.diagnostics[0].line, 5);
    EXPECT_NE(r.diagnostics[0].message.find("power of two"), std::string::npos);
}

TEST(Config, NegativeNuInSweepCitesPrecondition) {
    const std::string text = R"({
  "scenario": "conductivity-sweep",
  "nu_sweep": [0.1, -0.01],
  "symbol_probes": {"omega": [1.0], "k": [1.0]}
})";
    const auto r = parse_config(text);
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].field, "/nu_sweep/1");
    EXPECT_EQ(r.diagnostics[0].line, 3);
    EXPECT_NE(r.diagnostics[0].message.find("nu > 0"), std::string::npos);
}

TEST(Config, EveryProblemIsListed) {
    const std::string text = R"({
  "scenario": "multiplier-equivalence",
  "field": {"kind": "gaussian-packet", "amplitude": 1.0, "tau": -1.0, "ell": 1.0, "colour": 3},
  "grid": {"n_t": 100, "n_x": 100},
  "lambda": 0.0,
  "tolerances": {"two_route": 1e-3, "made_up": 1.0},
  "typo": true
})";
    const auto r = parse_config(text);
    std::set<std::string> fields;
    for (const auto& d : r.diagnostics) fields.insert(d.field);
    for (const char* f : {"/field/tau", "/field/colour", "/grid/n_t", "/grid/n_x", "/lambda", "/tolerances/made_up", "/typo"})
        EXPECT_TRUE(fields.count(f)) << f;
}

TEST(Config, KeysForeignToTheScenarioAreRejected) {
    const auto r = parse_config(R"({"scenario": "remainder-decomposition", "nu": 0.1,
        "field": {"kind": "gaussian-packet", "amplitude": 1.0, "tau": 1.0, "ell": 1.0},
        "lambda": [1.0, 2.0], "test_function": {}})");
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].field, "/nu");
}

TEST(Config, MissingSectionsAreReported) {
    const auto r = parse_config(R"({"scenario": "causal-solution"})");
    EXPECT_EQ(r.diagnostics.size(), 3u); // field, nu, probes
}

TEST(Config, SyntaxErrorCarriesLine) {
    const auto r = parse_config("{\n  \"scenario\": \"causal-solution\",\n  \"nu\": ,\n}");
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_TRUE(r.syntax_error);
    EXPECT_EQ(r.diagnostics[0].line, 3);
}

TEST(Config, UnknownScenario) {
    const auto r = parse_config(R"({"scenario": "warp-drive"})");
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].field, "/scenario");
}

TEST(Config, NyquistMustCoverSpectrum) {
    const auto r = parse_config(R"({"scenario": "multiplier-equivalence",
        "field": {"kind": "modulated-packet", "amplitude": 1.0, "tau": 2.0, "ell": 2.0, "omega0": 5.0, "k0": 5.0},
        "grid": {"n_t": 32, "n_x": 32}, "lambda": 1.0})");
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].field, "/grid");
}

TEST(Config, HashIsStable) {
    EXPECT_EQ(config_hash(""), "cbf29ce484222325");
    EXPECT_EQ(config_hash("a"), "af63dc4c8601ec8c");
}

// ---------------------------------------------------------------------------
// running

TEST(Run, ArtifactsAreByteIdenticalAcrossRunsAndThreadCounts) {
    const auto c = parse_ok(causal_text);
    const auto a = scratch("det_a"), b = scratch("det_b"), d = scratch("det_c");
    const auto ra = run_in(c, causal_text, a, 1);
    const auto rb = run_in(c, causal_text, b, 1);
    const auto rd = run_in(c, causal_text, d, 3);
    ASSERT_EQ(ra.status(), Status::pass) << ra.error;
    ASSERT_FALSE(ra.artifacts.empty());
    EXPECT_EQ(ra.artifacts, rb.artifacts);
    for (const auto& name : ra.artifacts) {
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
        EXPECT_EQ(slurp(a / name), slurp(d / name)) << name;
    }
    EXPECT_EQ(ra.config_hash, rd.config_hash);
}

TEST(Run, CsvHeaderAndRoundTrip) {
    const auto c = parse_ok(causal_text);
    const auto dir = scratch("csv");
    run_in(c, causal_text, dir);
    std::ifstream f(dir / "solution.csv");
    std::string header, row;
    std::getline(f, header);
    EXPECT_EQ(header, "t,x,v,f");
    std::getline(f, row);
    const double f_value = std::stod(row.substr(row.rfind(',') + 1));
    const landau::CausalSolution sol(0.1, landau::make_maxwellian({}), c.field());
    EXPECT_EQ(f_value, landau::causal_f(sol, -1.0, -1.0, -2.0));
}

TEST(Run, ReportIsWrittenOnFailure) {
    std::string text = causal_text;
    text.insert(text.rfind('}'), R"(, "tolerances": {"residual": 1e-12})");
    const auto c = parse_ok(text);
    const auto dir = scratch("fail");
    const auto r = run_in(c, text, dir);
    write_report(r, dir.string());
    EXPECT_EQ(r.status(), Status::fail);
    EXPECT_EQ(r.exit_code(), 1);
    const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(j["status"], "fail");
    EXPECT_EQ(j["scenario"], "causal-solution");
    EXPECT_EQ(j["checks"][0]["name"], "pde_residual");
    EXPECT_EQ(j["stages"].size(), 3u);
}

TEST(Run, WarningsDoNotFailTheRun) {
    RunReport r;
    r.checks.push_back({"a", Status::pass, 0.0, 0.0, ""});
    r.checks.push_back({"b", Status::warn, 0.0, 0.0, ""});
    EXPECT_EQ(r.status(), Status::warn);
    EXPECT_EQ(r.exit_code(), 0);
    r.error = "boom";
    EXPECT_EQ(r.status(), Status::error);
    EXPECT_EQ(r.exit_code(), 1);
}

// A = 0: every artifact value column vanishes and every check passes.
class ZeroAmplitude : public ::testing::TestWithParam<const char*> {};

TEST_P(ZeroAmplitude, AllZeroAllPass) {
    const std::string text = GetParam();
    const auto c = parse_ok(text);
    const auto dir = scratch("zero_" + to_string(c.scenario));
    const auto r = run_in(c, text, dir);
    ASSERT_TRUE(r.error.empty()) << r.error;
    for (const auto& ch : r.checks) EXPECT_EQ(ch.status, Status::pass) << ch.name << ": " << ch.detail;
    ASSERT_FALSE(r.artifacts.empty());
    // coordinate columns are the leading ones; data columns are all zero
    static const std::set<std::string> coords{"t", "x", "v", "nu", "lambda"};
    for (const auto& name : r.artifacts) {
        std::ifstream f(dir / name);
        std::string line;
        std::getline(f, line);
        std::vector<bool> is_coord;
        std::stringstream hs(line);
        for (std::string h; std::getline(hs, h, ',');) is_coord.push_back(coords.count(h) > 0);
        while (std::getline(f, line)) {
            std::stringstream ls(line);
            std::size_t col = 0;
            for (std::string cell; std::getline(ls, cell, ','); ++col) {
                if (is_coord[col]) continue;
                EXPECT_EQ(std::stod(cell), 0.0) << name << ": " << line;
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Scenarios, ZeroAmplitude,
    ::testing::Values(
        R"({"scenario": "causal-solution", "nu": 0.0,
            "field": {"kind": "gaussian-packet", "amplitude": 0.0, "tau": 1.0, "ell": 1.0},
            "probes": {"t": {"min": -1, "max": 1, "count": 2}, "x": {"min": 0, "max": 0, "count": 1},
                       "v": {"min": -1, "max": 1, "count": 2}}})",
        R"({"scenario": "limiting-absorption", "nu_sweep": [0.1, 0.01],
            "field": {"kind": "modulated-packet", "amplitude": 0.0, "tau": 1.0, "ell": 1.0, "omega0": 1.0, "k0": 1.0},
            "probes": {"t": {"min": 0, "max": 0, "count": 1}, "x": {"min": 0, "max": 0, "count": 1},
                       "v": {"min": -1, "max": 1, "count": 3}}})",
        R"({"scenario": "multiplier-equivalence", "lambda": 1.0,
            "field": {"kind": "gaussian-packet", "amplitude": 0.0, "tau": 2.0, "ell": 2.0},
            "grid": {"n_t": 16, "n_x": 16}})",
        R"({"scenario": "model-problem", "nu": 0.5, "source": {"amplitude": 0.0},
            "grid": {"n_t": 32, "n_x": 32}, "uniqueness": {"delta": 0.0, "horizon": 5.0},
            "probes": {"t": {"min": -2, "max": 2, "count": 3}, "x": {"min": 0, "max": 0, "count": 1}}})",
        R"({"scenario": "remainder-decomposition", "lambda": [1.0, 2.0],
            "field": {"kind": "gaussian-packet", "amplitude": 0.0, "tau": 1.0, "ell": 1.0},
            "test_function": {"omega0": 0.5, "k0": 0.3}})"),
    [](const ::testing::TestParamInfo<const char*>& info) {
        std::string name = to_string(parse_config(info.param).config->scenario);
        std::replace(name.begin(), name.end(), '-', '_');
        return name;
    });

// ---------------------------------------------------------------------------
// executable: exit codes and output-directory precedence

TEST(Executable, ExitCodes) {
    const std::string cli = LANDAU_CLI_PATH;
    const auto dir = scratch("exe");
    std::ofstream(dir / "good.json") << causal_text;
    std::ofstream(dir / "bad.json") << R"({"scenario": "causal-solution", "nu": -1})";
    std::ofstream(dir / "broken.json") << "{";
    std::string failing = causal_text;
    failing.insert(failing.rfind('}'), R"(, "tolerances": {"residual": 1e-12})");
    std::ofstream(dir / "failing.json") << failing;
    const std::string quiet = " > /dev/null 2>&1";

    EXPECT_EQ(shell(cli + " validate " + (dir / "good.json").string() + quiet), 0);
    EXPECT_EQ(shell(cli + " validate " + (dir / "bad.json").string() + quiet), 2);
    EXPECT_EQ(shell(cli + " validate " + (dir / "broken.json").string() + quiet), 2);
    EXPECT_EQ(shell(cli + " validate " + (dir / "missing.json").string() + quiet), 2);
    EXPECT_EQ(shell(cli + " frobnicate" + quiet), 2);
    EXPECT_EQ(shell(cli + " run " + (dir / "good.json").string() + " --quiet --output-dir " + (dir / "o1").string() + quiet), 0);
    EXPECT_EQ(shell(cli + " run " + (dir / "failing.json").string() + " --output-dir " + (dir / "o2").string() + quiet), 1);
    EXPECT_TRUE(fs::exists(dir / "o2" / "report.json"));
    EXPECT_EQ(shell(cli + " run " + (dir / "bad.json").string() + quiet), 2);
}

TEST(Executable, OutputDirPrecedence) {
    const std::string cli = LANDAU_CLI_PATH;
    const auto dir = scratch("prec");
    std::string text = causal_text;
    text.insert(text.rfind('}'), R"(, "output_dir": ")" + (dir / "from_config").string() + "\"");
    std::ofstream(dir / "c.json") << text;
    const std::string cfg = (dir / "c.json").string();
    const std::string quiet = " --quiet > /dev/null 2>&1";

    ASSERT_EQ(shell("env -u LANDAU_OUTPUT_DIR " + cli + " run " + cfg + quiet), 0);
    EXPECT_TRUE(fs::exists(dir / "from_config" / "report.json"));
    ASSERT_EQ(shell("LANDAU_OUTPUT_DIR=" + (dir / "from_env").string() + " " + cli + " run " + cfg + quiet), 0);
    EXPECT_TRUE(fs::exists(dir / "from_env" / "report.json"));
    ASSERT_EQ(shell("LANDAU_OUTPUT_DIR=" + (dir / "from_env2").string() + " " + cli + " run " + cfg
                    + " --output-dir " + (dir / "from_flag").string() + quiet), 0);
    EXPECT_TRUE(fs::exists(dir / "from_flag" / "report.json"));
    EXPECT_FALSE(fs::exists(dir / "from_env2"));
}
