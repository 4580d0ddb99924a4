#pragma once

#include <functional>
#include <vector>

#include "nflab/dynamics.hpp"

namespace nflab {

/**
 * Lyapunov functional of the flow,
 *
 *   F(u) = integral [ -1/2 S (J*S) + Phi(S) - h S ] dx,   S = f(u),
 *
 * with Phi the primitive of f^{-1}. F is nonincreasing along solutions and
 * its critical points are the equilibria.
 */
double lyapunov(const FlowParams& p, const GridFunction& u);

/// Adapter for SimulateOptions::lyapunov.
std::function<double(const GridFunction&)> lyapunov_observer(const FlowParams& p);

/// -2 tau (S_max^2 / 2 + L + h S_max): F cannot go below this on any state.
double lyapunov_lower_bound(const FlowParams& p);

struct EnergyReport {
    std::vector<double> values;
    std::vector<double> rate;  // (F(t+dt) - F(t)) / dt per step
    double min = 0.0;
    double max = 0.0;
    double max_increase = 0.0;       // largest positive jump, 0 if none
    double tolerance = 0.0;
    bool pass = false;               // no jump above tolerance * (1 + |F|)
    bool strict_descent = true;      // F strictly drops wherever sup|F(u)| > 1e-4
};

/// Uses the per-step lyapunov column when present, otherwise evaluates F on the stored states.
EnergyReport dissipation_check(const FlowParams& p, const Trajectory& traj, double tol = 1e-9);

}  // namespace nflab
