#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nflab/attractor.hpp"
#include "nflab/dynamics.hpp"

namespace nflab {

struct KernelConfig {
    std::string kind = "bump";  // bump | scaled_bump | mexican_hat | table
    double a = 1.0;
    double b1 = 4.0;
    double b2 = 2.0;
    std::string table_path;
};

/**
 * Effective configuration of one run. Config files are flat `key = value`
 * lines with dotted section names; '#' starts a comment. Every field has a
 * default, so an empty file is a valid config. See docs/config.md.
 */
struct RunConfig {
    double tau = 1.2;
    std::size_t n = 256;

    KernelConfig kernel;

    double beta = 1.0;
    double theta = 0.0;

    double h = 0.5;
    double dt = 0.05;
    Integrator integrator = Integrator::etd1;

    double T = 40.0;
    std::size_t stride = 10;
    std::size_t n_ic = 64;
    std::uint64_t seed = 1;
    double burn_in = 60.0;
    std::size_t tail_count = 20;
    double trace_time = 30.0;
    bool snapshots = false;
    std::string ic = "random";  // random | constant | cosine
    double ic_amplitude = 0.3;

    double newton_tol = 1e-10;
    double zero_tol = 1e-6;
    double gap_tol = 1e-3;
    double hyp_tol = 1e-6;
    double energy_tol = 1e-9;

    std::size_t eq_seeds = 6;
    std::size_t eq_kmax = 4;
    double eq_amp_min = 0.05;
    double eq_amp_max = 0.6;

    std::string sweep_kind = "scaled_bump";
    std::vector<double> sweep_values{0.90, 0.95, 0.99, 1.0};

    std::filesystem::path output_dir = "out";
};

/// Parses key-value text. Throws std::invalid_argument naming the key on an
/// unknown key, a malformed value or a violated constraint.
RunConfig parse_config_text(const std::string& text);

/// Reads and parses a config file; throws std::runtime_error if it cannot be read.
RunConfig parse_config(const std::filesystem::path& path);

/// Checks cross-field constraints (grid, kernel support, h, dt, ...).
void validate(const RunConfig& cfg);

/// Canonical `key = value` listing of every field, fixed order and precision.
std::string effective_config(const RunConfig& cfg);

/// First 16 hex digits of SHA-256 over effective_config().
std::string config_fingerprint(const RunConfig& cfg);

KernelProfile kernel_profile(const KernelConfig& kc);
FlowParams flow_params(const RunConfig& cfg);
MultistartSpec multistart_spec(const RunConfig& cfg);
SamplingSpec sampling_spec(const RunConfig& cfg);
SpectrumOptions spectrum_options(const RunConfig& cfg);

/// Sweep family from sweep.kind and sweep.values, in file order. For scaled
/// bumps s = a_base - a, where a_base = kernel.a (1 for the plain bump).
std::vector<SweepMember> sweep_family(const RunConfig& cfg);

}  // namespace nflab
