#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nflab/dynamics.hpp"

namespace nflab {

enum class EquilibriumKind { constant, nonconstant };

std::string to_string(EquilibriumKind kind);

/// Value spread at or below which a state counts as constant.
inline constexpr double kConstantSpread = 1e-8;

EquilibriumKind classify(const GridFunction& u);

struct Equilibrium {
    GridFunction state;
    double residual = 0.0;  // sup |F(state)|
    EquilibriumKind kind = EquilibriumKind::constant;
    int orbit_id = -1;
};

/**
 * All spatially constant equilibria: roots of g(c) = c - f(c) - h on
 * [h, h + S_max], found by a sign-change scan and refined by safeguarded
 * Newton. Sorted ascending. For beta <= 4 there is exactly one.
 */
std::vector<Equilibrium> solve_constant(const FlowParams& p);

/// C_ij = w J((i - j) h), the matrix of m -> J*m.
Eigen::MatrixXd convolution_matrix(const Kernel& J);

/// DF(u0) = -I + C diag(f'(u0)).
Eigen::MatrixXd linearization_matrix(const FlowParams& p, const GridFunction& u0);

/// -1 + f'(c) J_k for k = 0..n/2 (modes 1..n/2-1 are doubly degenerate).
std::vector<double> constant_spectrum(const FlowParams& p, double c);

struct SpectrumOptions {
    double zero_tol = 1e-6;
    double gap_tol = 1e-3;
    double hyp_tol = 1e-6;
};

struct SpectrumReport {
    std::vector<double> eigenvalues;  // descending
    std::optional<std::size_t> zero_index;
    double nearest_zero = 0.0;   // min |lambda|
    double next_nearest = 0.0;   // second smallest |lambda|
    bool zero_is_simple = false;
    double eigvec_alignment = 0.0;  // angle to u0' in radians; NaN for constant states
    bool hyperbolic = false;
    std::size_t unstable_count = 0;  // eigenvalues above hyp_tol
};

/**
 * Spectrum of DF(u0) computed from the symmetric similar matrix
 * -I + D^{1/2} C D^{1/2}, D = diag(f'(u0)), so every eigenvalue is real.
 * Throws std::domain_error if some f'(u0) <= 0.
 */
SpectrumReport spectrum(const FlowParams& p, const GridFunction& u0, const SpectrumOptions& opts = {});

struct UnstableDirection {
    double eigenvalue;
    GridFunction direction;  // unit L2 norm
    std::string label;
};

/// Eigen-directions with eigenvalue > hyp_tol, largest first. Constant states
/// use the exact Fourier modes (cos and sin for each degenerate pair).
std::vector<UnstableDirection> unstable_directions(const FlowParams& p, const Equilibrium& eq,
                                                   double hyp_tol = 1e-6);

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 50;
};

struct NewtonResult {
    Equilibrium eq;
    bool converged = false;
    int iterations = 0;
    std::vector<double> history;  // sup residual per iterate
};

/**
 * Damped Newton on F(u) = 0. Nonconstant iterates are solved with the
 * system bordered by the phase condition <u', du> = 0, which removes the
 * zero mode along the rotation orbit. Failure to converge is reported in
 * the result, not thrown.
 */
NewtonResult newton_solve(const FlowParams& p, const GridFunction& guess, const NewtonOptions& opts = {});

/// Every grid rotation of eq (a single point for constant states).
std::vector<Equilibrium> rotation_orbit(const FlowParams& p, const Equilibrium& eq);

/// min over grid shifts k of ||u - rotate(v, k)||_2.
double orbit_distance(const GridFunction& u, const GridFunction& v);

struct MultistartSpec {
    std::size_t seeds = 6;     // amplitudes per destabilized mode and constant root
    std::size_t kmax = 4;      // highest Fourier mode considered
    double amp_min = 0.05;
    double amp_max = 0.6;
    std::uint64_t seed = 1;
    double dedupe_tol = 1e-6;
    std::vector<GridFunction> warm_starts;  // tried first, in order
    NewtonOptions newton;
    SpectrumOptions spectrum;
};

struct EquilibriumSet {
    std::vector<Equilibrium> orbits;  // one representative per rotation orbit
    std::vector<SpectrumReport> spectra;
    std::size_t attempts = 0;
    std::size_t converged = 0;
};

EquilibriumSet find_equilibria(const FlowParams& p, const MultistartSpec& spec = {});

/// First h in `h_values` at which some constant root has -1 + f'(c) J_mode >= margin.
std::optional<double> turing_scan(const FlowParams& p, const std::vector<double>& h_values, double margin,
                                  std::size_t mode = 1);

}  // namespace nflab
