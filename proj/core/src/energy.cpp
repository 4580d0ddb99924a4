#include "nflab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nflab {

double lyapunov(const FlowParams& p, const GridFunction& u) {
    require_same_grid(p.grid(), u.grid());
    const auto& fr = p.firing();
    const auto S = apply_rate(fr, u);
    const auto JS = convolve(p.kernel(), S);
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        sum += -0.5 * S[i] * JS[i] + fr.primitive_at_state(u[i]) - p.h() * S[i];
    }
    return p.grid().weight() * sum;
}

std::function<double(const GridFunction&)> lyapunov_observer(const FlowParams& p) {
    return [p](const GridFunction& u) { return lyapunov(p, u); };
}

double lyapunov_lower_bound(const FlowParams& p) {
    const double smax = FiringRate::s_max();
    return -p.grid().measure() * (0.5 * smax * smax + p.firing().primitive_bound() + p.h() * smax);
}

EnergyReport dissipation_check(const FlowParams& p, const Trajectory& traj, double tol) {
    if (traj.times.empty()) throw std::invalid_argument("dissipation_check: empty trajectory");
    EnergyReport report;
    report.tolerance = tol;

    const bool per_step = std::all_of(traj.lyapunov.begin(), traj.lyapunov.end(),
                                      [](double v) { return std::isfinite(v); }) &&
                          !traj.lyapunov.empty();
    std::vector<double> times;
    if (per_step) {
        report.values = traj.lyapunov;
        times = traj.times;
    } else {
        for (const auto& s : traj.states) report.values.push_back(lyapunov(p, s));
        times = traj.state_times;
    }

    const auto& v = report.values;
    report.min = *std::min_element(v.begin(), v.end());
    report.max = *std::max_element(v.begin(), v.end());
    report.pass = true;
    for (std::size_t m = 0; m + 1 < v.size(); ++m) {
        const double jump = v[m + 1] - v[m];
        report.rate.push_back(jump / (times[m + 1] - times[m]));
        if (jump > 0.0) {
            report.max_increase = std::max(report.max_increase, jump);
            const double scale = 1.0 + std::max(std::abs(v[m]), std::abs(v[m + 1]));
            if (jump > tol * scale) report.pass = false;
        }
        if (per_step && traj.residual[m] > 1e-4 && !(jump < 0.0)) report.strict_descent = false;
    }
    return report;
}

}  // namespace nflab
