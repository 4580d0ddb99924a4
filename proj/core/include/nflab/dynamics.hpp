#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nflab/firing.hpp"
#include "nflab/grid.hpp"
#include "nflab/kernel.hpp"

namespace nflab {

enum class Integrator { etd1, rk4 };

Integrator parse_integrator(const std::string& name);
std::string to_string(Integrator integrator);

/// Everything that defines the flow du/dt = -u + J*f(u) + h on one grid.
class FlowParams {
public:
    /// Throws std::invalid_argument unless h > 0 and dt > 0.
    FlowParams(double h, FiringRate firing, Kernel kernel, double dt = 0.05,
               Integrator integrator = Integrator::etd1);

    double h() const { return h_; }
    const FiringRate& firing() const { return firing_; }
    const Kernel& kernel() const { return kernel_; }
    double dt() const { return dt_; }
    Integrator integrator() const { return integrator_; }
    const CircleGrid& grid() const { return kernel_.grid(); }

    FlowParams with_h(double h) const;
    FlowParams with_kernel(Kernel kernel) const;
    FlowParams with_dt(double dt, Integrator integrator) const;

private:
    double h_;
    FiringRate firing_;
    Kernel kernel_;
    double dt_;
    Integrator integrator_;
};

/// Pointwise f(u).
GridFunction apply_rate(const FiringRate& fr, const GridFunction& u);

/// J*f(u) + h, the nonlocal drive that the linear decay relaxes toward.
GridFunction drive(const FlowParams& p, const GridFunction& u);

/// F(u, J) = -u + J*f(u) + h.
GridFunction rhs(const FlowParams& p, const GridFunction& u);

/// Exponential Euler: e^{-dt} u + (1 - e^{-dt}) (J*f(u) + h).
GridFunction step_etd1(const FlowParams& p, const GridFunction& u);
/// Classical fourth-order Runge-Kutta on rhs().
GridFunction step_rk4(const FlowParams& p, const GridFunction& u);
/// Step with the integrator configured in p.
GridFunction step(const FlowParams& p, const GridFunction& u);

/**
 * Fixed-step solution. Diagnostics are recorded at every step (including
 * t = 0); full states only every `stride` steps plus the final one.
 */
struct Trajectory {
    std::vector<double> times;
    std::vector<double> l2_norm;
    std::vector<double> lyapunov;  // NaN unless an energy observer was supplied
    std::vector<double> residual;  // sup |F(u)|
    std::vector<double> min_u;
    std::vector<double> max_u;

    std::vector<double> state_times;
    std::vector<GridFunction> states;

    std::size_t steps() const { return times.empty() ? 0 : times.size() - 1; }
    const GridFunction& final_state() const { return states.back(); }
};

struct SimulateOptions {
    std::size_t stride = 10;
    std::function<double(const GridFunction&)> lyapunov;
};

/// Integrates ceil(T/dt) steps from u0. Throws std::runtime_error if a state
/// becomes non-finite and std::invalid_argument if T < dt.
Trajectory simulate(const FlowParams& p, const GridFunction& u0, double T, const SimulateOptions& opts = {});

struct AbsorbingRadius {
    double sup;  // R = 2 tau ||J||_inf S_max + h
    double l2;   // R sqrt(2 tau)
};

AbsorbingRadius absorbing_radius(const FlowParams& p);

/// Deterministic seed for stream (a, b) of a run seeded with `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

/**
 * Smooth random state: mean plus Fourier modes 1..modes with Gaussian
 * coefficients, scaled so the L2 norm is uniform-in-ball distributed within
 * `radius` on that (2 modes + 1)-dimensional subspace.
 */
GridFunction random_state(const CircleGrid& grid, double radius, std::mt19937_64& rng, std::size_t modes = 8);

}  // namespace nflab
