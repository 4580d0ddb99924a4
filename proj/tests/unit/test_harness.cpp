#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "nflab/commands.hpp"
#include "nflab/config.hpp"

using namespace nflab;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("nflab_test_" + name);
    fs::remove_all(dir);
    return dir;
}

// Small but nontrivial run so the commands finish quickly.
RunConfig quick_config(const fs::path& out) {
    auto cfg = parse_config_text(
        "grid.n = 64\n"
        "sim.T = 5\n"
        "sim.n_ic = 3\n"
        "sim.burn_in = 5\n"
        "sim.tail_count = 2\n"
        "sim.trace_time = 5\n"
        "equilibria.seeds = 2\n");
    cfg.output_dir = out;
    return cfg;
}

std::string error_of(const std::string& text) {
    try {
        parse_config_text(text);
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Config, EmptyTextGivesDefaults) {
    const auto cfg = parse_config_text("");
    const RunConfig def;
    EXPECT_EQ(effective_config(cfg), effective_config(def));
    EXPECT_EQ(cfg.tau, 1.2);
    EXPECT_EQ(cfg.n, 256u);
    EXPECT_EQ(cfg.h, 0.5);
    EXPECT_EQ(cfg.integrator, Integrator::etd1);
    EXPECT_EQ(cfg.sweep_values, (std::vector<double>{0.90, 0.95, 0.99, 1.0}));
}

TEST(Config, ParsesEveryKind) {
    const auto cfg = parse_config_text(
        "# comment\n"
        "grid.tau = 1.5   # trailing\n"
        "kernel.kind = scaled_bump\n"
        "kernel.a = 0.9\n"
        "firing.beta = 12\n"
        "dynamics.integrator = rk4\n"
        "sim.snapshots = true\n"
        "sweep.values = 0.8, 0.9\n"
        "output.dir = somewhere\n");
    EXPECT_EQ(cfg.tau, 1.5);
    EXPECT_EQ(cfg.kernel.kind, "scaled_bump");
    EXPECT_EQ(cfg.kernel.a, 0.9);
    EXPECT_EQ(cfg.beta, 12.0);
    EXPECT_EQ(cfg.integrator, Integrator::rk4);
    EXPECT_TRUE(cfg.snapshots);
    EXPECT_EQ(cfg.sweep_values, (std::vector<double>{0.8, 0.9}));
    EXPECT_EQ(cfg.output_dir, fs::path("somewhere"));
}

TEST(Config, RejectsBadValues) {
    EXPECT_NE(error_of("grid.tau = 1.0").find("tau must exceed 1"), std::string::npos);
    EXPECT_NE(error_of("dynamics.h = 0").find("h must be positive"), std::string::npos);
    EXPECT_NE(error_of("grid.colour = red").find("grid.colour"), std::string::npos);
    EXPECT_FALSE(error_of("grid.n = many").empty());
    EXPECT_FALSE(error_of("grid.n = 255").empty());
    EXPECT_FALSE(error_of("dynamics.integrator = euler").empty());
    EXPECT_FALSE(error_of("just some words").empty());
    EXPECT_THROW(parse_config("/nonexistent/nflab.cfg"), std::runtime_error);
}

TEST(Config, FingerprintTracksEffectiveValues) {
    const auto a = parse_config_text("");
    auto b = parse_config_text("dynamics.h = 0.5\n");
    EXPECT_EQ(config_fingerprint(a), config_fingerprint(b));
    EXPECT_EQ(config_fingerprint(a).size(), 16u);
    b.output_dir = "elsewhere";
    EXPECT_EQ(config_fingerprint(a), config_fingerprint(b));
    EXPECT_NE(config_fingerprint(a), config_fingerprint(parse_config_text("dynamics.h = 0.50000001")));
    EXPECT_NE(config_fingerprint(a), config_fingerprint(parse_config_text("sim.seed = 2")));
}

TEST(Config, SweepFamilyEndsAtBase) {
    const auto fam = sweep_family(parse_config_text(""));
    ASSERT_EQ(fam.size(), 4u);
    EXPECT_NEAR(fam[0].s, 0.1, 1e-15);
    EXPECT_EQ(fam.back().s, 0.0);
}

TEST(Commands, UnknownCommandRejected) {
    std::ostringstream log;
    EXPECT_THROW(run_command("bogus", parse_config_text(""), log), std::invalid_argument);
    EXPECT_EQ(command_names().size(), 7u);
}

TEST(Commands, CheckHypothesesPassesAtDefaults) {
    auto cfg = parse_config_text("");
    cfg.output_dir = scratch("hyp");
    std::ostringstream log;
    EXPECT_EQ(run_command("check-hypotheses", cfg, log), 0);
    const auto j = nlohmann::json::parse(slurp(cfg.output_dir / "hypotheses.json"));
    EXPECT_EQ(j["config_fingerprint"], config_fingerprint(cfg));
    EXPECT_TRUE(j["all_pass"].get<bool>());
    for (const char* group : {"entries", "kernel", "domain"}) {
        ASSERT_FALSE(j[group].empty()) << group;
        for (const auto& e : j[group]) EXPECT_TRUE(e["pass"].get<bool>()) << e["hypothesis"];
    }
    EXPECT_EQ(j["domain"][0]["hypothesis"], "tau.two_tau_over_e_below_one");
    EXPECT_NEAR(j["domain"][0]["measured"].get<double>(), 2.4 / std::exp(1.0), 1e-15);
}

TEST(Commands, CheckHypothesesFailsForMexicanHat) {
    auto cfg = parse_config_text("kernel.kind = mexican_hat\n");
    cfg.output_dir = scratch("hyp_mh");
    std::ostringstream log;
    EXPECT_EQ(run_command("check-hypotheses", cfg, log), 1);
}

TEST(Commands, RerunsAreByteIdentical) {
    for (const std::string cmd : {"simulate", "equilibria", "attractor"}) {
        const auto a = scratch("rerun_a");
        const auto b = scratch("rerun_b");
        std::ostringstream log;
        ASSERT_EQ(run_command(cmd, quick_config(a), log), 0) << cmd;
        ASSERT_EQ(run_command(cmd, quick_config(b), log), 0) << cmd;
        std::size_t files = 0;
        for (const auto& entry : fs::directory_iterator(a)) {
            const auto name = entry.path().filename();
            ASSERT_TRUE(fs::exists(b / name)) << name;
            EXPECT_EQ(slurp(entry.path()), slurp(b / name)) << cmd << ": " << name;
            ++files;
        }
        EXPECT_GE(files, 2u);
    }
}

TEST(Commands, EveryArtifactCarriesFingerprint) {
    const auto out = scratch("fp");
    const auto cfg = quick_config(out);
    const auto fp = config_fingerprint(cfg);
    std::ostringstream log;
    for (const auto& cmd : command_names()) {
        if (cmd == "sweep") continue;  // covered below
        EXPECT_EQ(run_command(cmd, cfg, log), 0) << cmd << "\n" << log.str();
    }
    std::size_t checked = 0;
    for (const auto& entry : fs::recursive_directory_iterator(out)) {
        if (!entry.is_regular_file()) continue;
        const auto text = slurp(entry.path());
        EXPECT_NE(text.find(fp), std::string::npos) << entry.path();
        ++checked;
    }
    EXPECT_GE(checked, 7u);
    const auto eff = slurp(out / "config.effective");
    EXPECT_NE(eff.find("dynamics.h = 0.5"), std::string::npos);
}

TEST(Commands, SingleMemberSweep) {
    auto cfg = quick_config(scratch("sweep"));
    cfg.sweep_values = {1.0};
    std::ostringstream log;
    ASSERT_EQ(run_command("sweep", cfg, log), 0) << log.str();
    const auto csv = slurp(cfg.output_dir / "continuity.csv");
    EXPECT_NE(csv.find("# config_fingerprint=" + config_fingerprint(cfg)), std::string::npos);
    EXPECT_NE(csv.find("# sampling_floor="), std::string::npos);
    EXPECT_NE(csv.find("s,l1_dist,dE_fwd,dE_bwd,dA_fwd,dA_bwd,n_orbits_found"), std::string::npos);
    const auto j = nlohmann::json::parse(slurp(cfg.output_dir / "continuity.json"));
    ASSERT_EQ(j["rows"].size(), 1u);
    EXPECT_EQ(j["rows"][0]["l1_dist"].get<double>(), 0.0);
}

TEST(Commands, SpectrumMatchesAnalyticAtDefaults) {
    auto cfg = quick_config(scratch("spec"));
    std::ostringstream log;
    ASSERT_EQ(run_command("spectrum", cfg, log), 0) << log.str();
    const auto j = nlohmann::json::parse(slurp(cfg.output_dir / "spectrum.json"));
    ASSERT_EQ(j["orbits"].size(), 1u);
    EXPECT_LE(j["orbits"][0]["analytic_max_error"].get<double>(), 1e-8);
    EXPECT_TRUE(j["orbits"][0]["hyperbolic"].get<bool>());
}
