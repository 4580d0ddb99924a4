#include "nflab/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "nflab/energy.hpp"
#include "nflab/parallel.hpp"
#include "nflab/report.hpp"

namespace nflab {

namespace {

namespace fs = std::filesystem;

struct Context {
    const RunConfig& cfg;
    std::ostream& log;
    const CommandOptions& opts;
    std::string fp;
    fs::path dir;
};

std::string tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", t);
    return buf;
}

GridFunction initial_state(const RunConfig& cfg, const FlowParams& p) {
    const auto& grid = p.grid();
    if (cfg.ic == "constant") return GridFunction::constant(grid, cfg.h);
    if (cfg.ic == "cosine") {
        const double k = grid.wavenumber(1);
        const double h = cfg.h;
        const double amp = cfg.ic_amplitude;
        return GridFunction::sample(grid, [=](double x) { return h + amp * std::cos(k * x); });
    }
    std::mt19937_64 rng(derive_seed(cfg.seed, 0, 0));
    return random_state(grid, absorbing_radius(p).l2, rng);
}

int cmd_simulate(Context& c) {
    const auto p = flow_params(c.cfg);
    SimulateOptions so;
    so.stride = c.cfg.stride;
    so.lyapunov = lyapunov_observer(p);
    const auto traj = simulate(p, initial_state(c.cfg, p), c.cfg.T, so);
    const auto energy = dissipation_check(p, traj, c.cfg.energy_tol);

    {
        std::ofstream out(c.dir / c.opts.trajectory_file, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + (c.dir / c.opts.trajectory_file).string());
        write_trajectory_csv(out, traj, c.fp);
    }
    if (c.cfg.snapshots) {
        for (std::size_t k = 0; k < traj.states.size(); ++k) {
            write_state_csv(c.dir / ("state_" + tag(traj.state_times[k]) + ".csv"), traj.states[k], c.fp);
        }
    }
    auto doc = to_json(energy);
    doc["lower_bound"] = lyapunov_lower_bound(p);
    doc["steps"] = traj.steps();
    write_json(c.dir / "energy.json", doc, c.fp);

    c.log << "simulate: " << traj.steps() << " steps, final L2 norm " << traj.l2_norm.back() << ", energy "
          << energy.values.front() << " -> " << energy.values.back() << (energy.pass ? "" : " [INCREASE]") << '\n';
    if (!energy.pass) {
        c.log << "simulate: Lyapunov functional increased by " << energy.max_increase << '\n';
        return 1;
    }
    return 0;
}

nlohmann::json orbit_json(const FlowParams& p, const Equilibrium& eq, const SpectrumReport& sp, std::size_t kmax) {
    auto ev = nlohmann::json::array();
    for (std::size_t k = 0; k <= kmax && k < sp.eigenvalues.size(); ++k) ev.push_back(sp.eigenvalues[k]);
    return {{"orbit_id", eq.orbit_id},
            {"kind", to_string(eq.kind)},
            {"residual", eq.residual},
            {"lyapunov_value", lyapunov(p, eq.state)},
            {"mean", integrate(eq.state) / p.grid().measure()},
            {"eigenvalues", ev},
            {"zero_is_simple", sp.zero_is_simple},
            {"hyperbolic", sp.hyperbolic},
            {"unstable_count", sp.unstable_count},
            {"state_file", "equilibrium_" + std::to_string(eq.orbit_id) + ".csv"}};
}

int cmd_equilibria(Context& c) {
    const auto p = flow_params(c.cfg);
    const auto set = find_equilibria(p, multistart_spec(c.cfg));
    auto orbits = nlohmann::json::array();
    for (std::size_t i = 0; i < set.orbits.size(); ++i) {
        const auto& eq = set.orbits[i];
        orbits.push_back(orbit_json(p, eq, set.spectra[i], c.cfg.eq_kmax));
        write_state_csv(c.dir / ("equilibrium_" + std::to_string(eq.orbit_id) + ".csv"), eq.state, c.fp);
        c.log << "equilibria: orbit " << eq.orbit_id << " " << to_string(eq.kind) << " residual " << eq.residual
              << " unstable " << set.spectra[i].unstable_count << '\n';
        if (eq.kind == EquilibriumKind::nonconstant && !set.spectra[i].zero_is_simple) {
            c.log << "equilibria: warning: zero eigenvalue of orbit " << eq.orbit_id << " is not simple\n";
        }
    }
    write_json(c.dir / "equilibria.json",
               {{"orbits", orbits}, {"attempts", set.attempts}, {"converged", set.converged}}, c.fp);
    if (set.converged < set.attempts) {
        c.log << "equilibria: warning: " << set.attempts - set.converged << " of " << set.attempts
              << " Newton starts did not converge\n";
    }
    return 0;
}

// Dense eigenvalues of a constant state against -1 + f'(c) J_k, each mode
// counted with its multiplicity.
double analytic_mismatch(const FlowParams& p, double c, const std::vector<double>& dense) {
    const auto per_mode = constant_spectrum(p, c);
    const std::size_t half = p.grid().size() / 2;
    std::vector<double> expected;
    for (std::size_t k = 0; k <= half; ++k) {
        expected.push_back(per_mode[k]);
        if (k != 0 && k != half) expected.push_back(per_mode[k]);
    }
    std::sort(expected.begin(), expected.end(), std::greater<>());
    double err = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i) err = std::max(err, std::abs(expected[i] - dense[i]));
    return err;
}

int cmd_spectrum(Context& c) {
    const auto p = flow_params(c.cfg);
    const auto set = find_equilibria(p, multistart_spec(c.cfg));
    auto items = nlohmann::json::array();
    int status = 0;
    for (std::size_t i = 0; i < set.orbits.size(); ++i) {
        const auto& eq = set.orbits[i];
        const auto& sp = set.spectra[i];
        auto item = to_json(sp);
        item["orbit_id"] = eq.orbit_id;
        item["kind"] = to_string(eq.kind);
        if (eq.kind == EquilibriumKind::constant) {
            const double err = analytic_mismatch(p, eq.state[0], sp.eigenvalues);
            item["analytic_max_error"] = err;
            if (err > 1e-8) {
                c.log << "spectrum: orbit " << eq.orbit_id << " differs from Fourier multipliers by " << err << '\n';
                status = 1;
            }
        }
        c.log << "spectrum: orbit " << eq.orbit_id << " leading eigenvalue " << sp.eigenvalues.front()
              << (sp.hyperbolic ? " hyperbolic" : " non-hyperbolic") << '\n';
        items.push_back(item);
    }
    write_json(c.dir / "spectrum.json", {{"orbits", items}}, c.fp);
    return status;
}

int cmd_lyapunov(Context& c) {
    const auto p = flow_params(c.cfg);
    const double bound = lyapunov_lower_bound(p);
    const auto radius = absorbing_radius(p);
    const std::size_t count = std::max<std::size_t>(c.cfg.n_ic, 1);
    std::vector<EnergyReport> reports(count);
    parallel_for(count, [&](std::size_t i) {
        std::mt19937_64 rng(derive_seed(c.cfg.seed, 3, i));
        SimulateOptions so;
        so.stride = c.cfg.stride;
        so.lyapunov = lyapunov_observer(p);
        const auto traj = simulate(p, random_state(p.grid(), radius.l2, rng), c.cfg.T, so);
        reports[i] = dissipation_check(p, traj, c.cfg.energy_tol);
    });

    auto runs = nlohmann::json::array();
    bool ok = true;
    for (std::size_t i = 0; i < count; ++i) {
        auto r = to_json(reports[i]);
        r["ic"] = i;
        r["above_lower_bound"] = reports[i].min >= bound;
        ok = ok && reports[i].pass && reports[i].min >= bound;
        runs.push_back(r);
    }
    write_json(c.dir / "lyapunov.json", {{"runs", runs}, {"lower_bound", bound}, {"all_pass", ok}}, c.fp);
    c.log << "lyapunov: " << count << " trajectories, " << (ok ? "all nonincreasing" : "VIOLATION") << '\n';
    return ok ? 0 : 1;
}

void dump_points(const fs::path& dir, const AttractorSample& s, const std::string& fp) {
    for (std::size_t k = 0; k < s.points.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "point_%05zu.csv", k);
        write_state_csv(dir / name, s.points[k], fp);
    }
}

int cmd_attractor(Context& c) {
    const auto p = flow_params(c.cfg);
    const auto set = find_equilibria(p, multistart_spec(c.cfg));
    const auto sample = sample_attractor(p, set, sampling_spec(c.cfg));

    {
        std::ofstream out(c.dir / "attractor_points.csv", std::ios::binary);
        out << "# config_fingerprint=" << c.fp << '\n';
        out << "point,kind,orbit_id,direction,sign,target_orbit,ic,time,l2_norm,lyapunov\n";
        for (std::size_t k = 0; k < sample.points.size(); ++k) {
            const auto& pr = sample.provenance[k];
            char buf[96];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", pr.time, l2_norm(sample.points[k]),
                          lyapunov(p, sample.points[k]));
            out << k << ',' << to_string(pr.kind) << ',' << pr.orbit_id << ',' << pr.direction << ',' << pr.sign
                << ',' << pr.target_orbit << ',' << pr.ic << ',' << buf << '\n';
        }
    }
    if (c.cfg.snapshots) dump_points(c.dir / "attractor", sample, c.fp);

    std::map<std::string, std::size_t> counts;
    for (const auto& pr : sample.provenance) ++counts[to_string(pr.kind)];
    write_json(c.dir / "attractor.json",
               {{"points", sample.points.size()},
                {"by_kind", counts},
                {"orbits", set.orbits.size()},
                {"dropped_outside_ball", sample.dropped_outside_ball},
                {"absorbing_radius_l2", absorbing_radius(p).l2},
                {"sample_fingerprint", sample.fingerprint}},
               c.fp);
    c.log << "attractor: " << sample.points.size() << " points from " << set.orbits.size() << " equilibrium orbits\n";
    if (sample.dropped_outside_ball > 0) {
        c.log << "attractor: " << sample.dropped_outside_ball << " points left the absorbing ball\n";
        return 1;
    }
    return 0;
}

int cmd_sweep(Context& c) {
    const auto p = flow_params(c.cfg);
    SweepSpec spec;
    spec.sampling = sampling_spec(c.cfg);
    spec.multistart = multistart_spec(c.cfg);
    const auto report = continuity_sweep(p, sweep_family(c.cfg), spec);
    {
        std::ofstream out(c.dir / "continuity.csv", std::ios::binary);
        write_continuity_csv(out, report, c.fp);
    }
    write_json(c.dir / "continuity.json", to_json(report), c.fp);
    for (const auto& r : report.rows) {
        if (!r.ok) c.log << "sweep: warning: member s=" << r.s << " failed: " << r.error << '\n';
    }
    c.log << "sweep: " << report.rows.size() << " members, sampling floor " << report.floor << '\n';
    return 0;
}

int cmd_check_hypotheses(Context& c) {
    const auto p = flow_params(c.cfg);
    auto report = check_hypotheses(p.firing());
    const auto kernel_entries = check_kernel_class(p.kernel());
    const double ratio = 2.0 * c.cfg.tau / std::numbers::e;
    CheckEntry tau_entry{"tau.two_tau_over_e_below_one", ratio < 1.0, ratio, 1.0, 0.0};

    auto doc = to_json(report);
    auto kernel = nlohmann::json::array();
    for (const auto& e : kernel_entries) kernel.push_back(to_json(e));
    doc["kernel"] = kernel;
    doc["domain"] = nlohmann::json::array({to_json(tau_entry)});
    const bool ok = report.all_pass() && all_pass(kernel_entries) && tau_entry.pass;
    doc["all_pass"] = ok;
    write_json(c.dir / "hypotheses.json", doc, c.fp);

    auto print = [&](const CheckEntry& e) {
        c.log << (e.pass ? "PASS " : "FAIL ") << e.hypothesis << " measured=" << e.measured << " bound=" << e.bound
              << '\n';
    };
    for (const auto& e : report.entries) print(e);
    for (const auto& e : kernel_entries) print(e);
    print(tau_entry);
    return ok ? 0 : 1;
}

using Handler = int (*)(Context&);

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table = {
        {"simulate", cmd_simulate},   {"equilibria", cmd_equilibria}, {"spectrum", cmd_spectrum},
        {"lyapunov", cmd_lyapunov},   {"attractor", cmd_attractor},   {"sweep", cmd_sweep},
        {"check-hypotheses", cmd_check_hypotheses},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = {"simulate", "equilibria", "spectrum",        "lyapunov",
                                                   "attractor", "sweep",     "check-hypotheses"};
    return names;
}

int run_command(const std::string& cmd, const RunConfig& cfg, std::ostream& log, const CommandOptions& opts) {
    const auto it = handlers().find(cmd);
    if (it == handlers().end()) throw std::invalid_argument("unknown command '" + cmd + "'");
    validate(cfg);
    Context c{cfg, log, opts, config_fingerprint(cfg), cfg.output_dir};
    try {
        fs::create_directories(c.dir);
        write_text(c.dir / "config.effective", "# config_fingerprint=" + c.fp + "\n" + effective_config(cfg));
        return it->second(c);
    } catch (const std::exception& e) {
        throw std::runtime_error(cmd + ": " + e.what());
    }
}

}  // namespace nflab
