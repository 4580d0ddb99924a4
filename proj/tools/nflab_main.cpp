#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nflab/commands.hpp"

namespace fs = std::filesystem;

namespace {

std::string describe(const std::string& cmd) {
    if (cmd == "simulate") return "integrate one trajectory; writes the trajectory CSV and energy.json";
    if (cmd == "equilibria") return "find equilibrium orbits by multistart Newton";
    if (cmd == "spectrum") return "linearization spectrum at every equilibrium";
    if (cmd == "lyapunov") return "check energy descent on sim.n_ic random trajectories";
    if (cmd == "attractor") return "sample the global attractor";
    if (cmd == "sweep") return "continuity sweep over the kernel family";
    if (cmd == "check-hypotheses") return "check firing-rate, kernel and domain hypotheses";
    return {};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nflab: neural field dynamics on the circle"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out;
    std::optional<std::uint64_t> seed;

    for (const auto& name : nflab::command_names()) {
        auto* sub = app.add_subcommand(name, describe(name));
        sub->add_option("--config", config_path, "key = value config file (empty file = defaults)")->required();
        sub->add_option("--out", out, "output directory (simulate also accepts a .csv trajectory path)");
        sub->add_option("--seed", seed, "override sim.seed");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string cmd = app.get_subcommands().front()->get_name();

    try {
        auto cfg = nflab::parse_config(config_path);
        if (seed) cfg.seed = *seed;
        nflab::CommandOptions opts;
        if (!out.empty()) {
            const fs::path p(out);
            if (cmd == "simulate" && p.extension() == ".csv") {
                opts.trajectory_file = p.filename().string();
                cfg.output_dir = p.has_parent_path() ? p.parent_path() : fs::path(".");
            } else {
                cfg.output_dir = p;
            }
        }
        return nflab::run_command(cmd, cfg, std::cout, opts);
    } catch (const std::exception& e) {
        std::cerr << "nflab: " << e.what() << '\n';
        return 2;
    }
}
