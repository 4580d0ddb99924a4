#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nflab/equilibria.hpp"

namespace nflab {

/**
 * Hausdorff semidistance sup_{a in A} inf_{b in B} ||a - b||_2.
 *
 * semidistance() prunes with partial sums and runs A in parallel; it returns
 * bit-for-bit the value of semidistance_brute(), the plain double loop.
 * Both throw std::domain_error on an empty set.
 */
double semidistance(std::span<const GridFunction> A, std::span<const GridFunction> B);
double semidistance_brute(std::span<const GridFunction> A, std::span<const GridFunction> B);

struct Provenance {
    enum class Kind { equilibrium, tail, trace, connection };
    Kind kind = Kind::tail;
    int orbit_id = -1;
    std::string direction;  // eigen-direction label(s) for traces
    int sign = 0;
    int target_orbit = -1;  // saddle reached by a connection
    double eps = 0.0;
    std::size_t ic = 0;     // initial-condition index for tails
    double time = 0.0;
};

std::string to_string(Provenance::Kind kind);

/// One integrated curve leaving an equilibrium.
struct ManifoldTrace {
    int orbit_id = -1;
    std::string direction;
    int sign = 0;
    double eps = 0.0;
    double eigenvalue = 0.0;
    std::vector<double> times;
    std::vector<GridFunction> states;
};

/**
 * Integrates from u0 +/- eps * phi for every unstable eigen-direction phi up
 * to time T. The curve is kept at points `arc_step` apart in L2 arc length
 * (linear interpolation within a step), so sets traced from nearby
 * equilibria are compared by shape rather than by timing. Stable equilibria
 * give no traces.
 */
std::vector<ManifoldTrace> unstable_traces(const FlowParams& p, const Equilibrium& eq, double eps, double T,
                                           double arc_step, double hyp_tol = 1e-6);

/// Flattened states of unstable_traces().
std::vector<GridFunction> trace_unstable_manifold(const FlowParams& p, const Equilibrium& eq, double eps, double T,
                                                  double arc_step, double hyp_tol = 1e-6);

struct ConnectionSpec {
    double eps = 1e-3;
    double T = 30.0;
    double arc_step = 3e-3;
    std::size_t scan = 16;        // seeding angles tried per direction pair
    std::size_t bisections = 48;
    double hyp_tol = 1e-6;
};

struct ConnectionTrace {
    ManifoldTrace trace;       // truncated at the closest approach to `target_orbit`
    double angle = 0.0;
    int target_orbit = -1;
    double closest_approach = 0.0;  // orbit distance to the target
};

/**
 * Heteroclinic connections out of an equilibrium with two or more unstable
 * directions. Seeds u0 + eps (cos a phi_i + sin a phi_j) are scanned over a,
 * and wherever the endpoint changes basin the angle is bisected; the
 * boundary trajectory runs into a saddle from `others`.
 */
std::vector<ConnectionTrace> trace_connections(const FlowParams& p, const Equilibrium& eq,
                                               std::span<const Equilibrium> others, const ConnectionSpec& spec = {});

struct SamplingSpec {
    std::size_t n_ic = 64;
    double burn_in = 60.0;
    std::size_t tail_count = 20;
    double tail_spacing = 0.5;
    double trace_time = 30.0;
    double trace_arc_step = 0.0;  // <= 0 selects 1e-3 R_l2
    std::uint64_t seed = 1;
    bool connections = true;
    bool include_equilibria = true;
    double hyp_tol = 1e-6;
};

struct AttractorSample {
    std::vector<GridFunction> points;
    std::vector<Provenance> provenance;
    std::string fingerprint;
    std::size_t dropped_outside_ball = 0;
};

/// Seeding offset along unstable directions: min(1e-3 R_l2, 0.1 gap).
double trace_eps(const FlowParams& p, const SpectrumReport& spectrum);

/**
 * Finite approximation of the global attractor: the equilibria, tails of
 * trajectories from seeded states in the absorbing ball, unstable-manifold
 * traces and connecting orbits of every unstable equilibrium.
 */
AttractorSample sample_attractor(const FlowParams& p, const EquilibriumSet& equilibria, const SamplingSpec& spec = {});

/// Both semidistances between the equilibrium sets, orbits expanded by all grid rotations.
std::pair<double, double> equilibrium_set_distance(std::span<const Equilibrium> E0, std::span<const Equilibrium> E1);

struct SweepMember {
    double s = 0.0;  // sweep parameter, e.g. 1 - a for scaled bumps
    KernelProfile profile;
};

struct SweepSpec {
    SamplingSpec sampling;
    MultistartSpec multistart;
    double floor_min = 1e-9;  // resolution floor below which distances are noise
};

struct ContinuityRow {
    double s = 0.0;
    double l1_dist = 0.0;
    double dE_fwd = 0.0;  // dist(E_0 -> E_s)
    double dE_bwd = 0.0;  // dist(E_s -> E_0)
    double dA_fwd = 0.0;
    double dA_bwd = 0.0;
    std::size_t n_orbits = 0;
    bool ok = true;
    std::string error;
};

struct ContinuityReport {
    std::vector<ContinuityRow> rows;  // in family order
    double floor = 0.0;               // max(measured_floor, floor_min)
    double measured_floor = 0.0;      // self-distance of two independently seeded base runs
    bool monotone_dE_fwd = false;
    bool monotone_dE_bwd = false;
    bool monotone_dA_fwd = false;
    bool monotone_dA_bwd = false;
};

/**
 * Continuity evidence in J: for every family member rebuild the kernel,
 * re-solve equilibria warm-started from the base ones, resample the attractor
 * and measure all four semidistances to the base. The base kernel must be
 * the last family member. Members that fail, or that sit at a bifurcation
 * point (a non-hyperbolic constant equilibrium or a degenerate zero mode),
 * are recorded and left out of the monotonicity flags. A base at a
 * bifurcation point throws std::invalid_argument.
 */
ContinuityReport continuity_sweep(const FlowParams& base, const std::vector<SweepMember>& family,
                                  const SweepSpec& spec = {});

}  // namespace nflab
