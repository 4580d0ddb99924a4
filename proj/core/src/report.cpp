#include "nflab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace nflab {

namespace {

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// JSON has no NaN; emit null instead.
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::string& fingerprint) {
    os << "# config_fingerprint=" << fingerprint << '\n';
    os << "t,l2_norm,lyapunov,min_u,max_u\n";
    for (std::size_t m = 0; m < traj.times.size(); ++m) {
        os << g17(traj.times[m]) << ',' << g17(traj.l2_norm[m]) << ',' << g17(traj.lyapunov[m]) << ','
           << g17(traj.min_u[m]) << ',' << g17(traj.max_u[m]) << '\n';
    }
}

void write_state_csv(const std::filesystem::path& path, const GridFunction& u, const std::string& fingerprint) {
    auto out = open_out(path);
    out << "# config_fingerprint=" << fingerprint << '\n';
    write_csv(out, u);
}

void write_continuity_csv(std::ostream& os, const ContinuityReport& report, const std::string& fingerprint) {
    os << "# config_fingerprint=" << fingerprint << '\n';
    os << "# sampling_floor=" << g17(report.floor) << '\n';
    os << "s,l1_dist,dE_fwd,dE_bwd,dA_fwd,dA_bwd,n_orbits_found\n";
    for (const auto& r : report.rows) {
        if (!r.ok) {
            os << "# s=" << g17(r.s) << " failed: " << r.error << '\n';
            continue;
        }
        os << g17(r.s) << ',' << g17(r.l1_dist) << ',' << g17(r.dE_fwd) << ',' << g17(r.dE_bwd) << ','
           << g17(r.dA_fwd) << ',' << g17(r.dA_bwd) << ',' << r.n_orbits << '\n';
    }
}

void write_json(const std::filesystem::path& path, nlohmann::json doc, const std::string& fingerprint) {
    doc["config_fingerprint"] = fingerprint;
    auto out = open_out(path);
    out << doc.dump(2) << '\n';
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
}

nlohmann::json to_json(const CheckEntry& e) {
    return {{"hypothesis", e.hypothesis},
            {"pass", e.pass},
            {"measured", num(e.measured)},
            {"bound", num(e.bound)},
            {"tolerance", num(e.tolerance)}};
}

nlohmann::json to_json(const HypothesisReport& r) {
    auto entries = nlohmann::json::array();
    for (const auto& e : r.entries) entries.push_back(to_json(e));
    return {{"entries", entries},
            {"samples", r.samples},
            {"tolerance", r.tolerance},
            {"seed", r.seed},
            {"all_pass", r.all_pass()}};
}

nlohmann::json to_json(const EnergyReport& r) {
    return {{"min", num(r.min)},
            {"max", num(r.max)},
            {"max_increase", num(r.max_increase)},
            {"tolerance", r.tolerance},
            {"pass", r.pass},
            {"strict_descent", r.strict_descent}};
}

nlohmann::json to_json(const SpectrumReport& r) {
    auto ev = nlohmann::json::array();
    for (double v : r.eigenvalues) ev.push_back(num(v));
    return {{"eigenvalues", ev},
            {"zero_index", r.zero_index ? nlohmann::json(*r.zero_index) : nlohmann::json(nullptr)},
            {"nearest_zero", num(r.nearest_zero)},
            {"next_nearest", num(r.next_nearest)},
            {"zero_is_simple", r.zero_is_simple},
            {"eigvec_alignment", num(r.eigvec_alignment)},
            {"hyperbolic", r.hyperbolic},
            {"unstable_count", r.unstable_count}};
}

nlohmann::json to_json(const ContinuityReport& r) {
    auto rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"s", row.s},
                        {"l1_dist", num(row.l1_dist)},
                        {"dE_fwd", num(row.dE_fwd)},
                        {"dE_bwd", num(row.dE_bwd)},
                        {"dA_fwd", num(row.dA_fwd)},
                        {"dA_bwd", num(row.dA_bwd)},
                        {"n_orbits_found", row.n_orbits},
                        {"ok", row.ok},
                        {"error", row.error}});
    }
    return {{"rows", rows},
            {"sampling_floor", r.floor},
            {"measured_floor", r.measured_floor},
            {"monotone",
             {{"dE_fwd", r.monotone_dE_fwd},
              {"dE_bwd", r.monotone_dE_bwd},
              {"dA_fwd", r.monotone_dA_fwd},
              {"dA_bwd", r.monotone_dA_bwd}}}};
}

}  // namespace nflab
