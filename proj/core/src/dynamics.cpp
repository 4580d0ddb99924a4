#include "nflab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace nflab {

Integrator parse_integrator(const std::string& name) {
    if (name == "etd1") return Integrator::etd1;
    if (name == "rk4") return Integrator::rk4;
    throw std::invalid_argument("unknown integrator '" + name + "' (expected etd1 or rk4)");
}

std::string to_string(Integrator integrator) {
    return integrator == Integrator::etd1 ? "etd1" : "rk4";
}

FlowParams::FlowParams(double h, FiringRate firing, Kernel kernel, double dt, Integrator integrator)
    : h_(h), firing_(firing), kernel_(std::move(kernel)), dt_(dt), integrator_(integrator) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("dynamics: h must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dynamics: dt must be positive");
}

FlowParams FlowParams::with_h(double h) const { return FlowParams(h, firing_, kernel_, dt_, integrator_); }

FlowParams FlowParams::with_kernel(Kernel kernel) const {
    return FlowParams(h_, firing_, std::move(kernel), dt_, integrator_);
}

FlowParams FlowParams::with_dt(double dt, Integrator integrator) const {
    return FlowParams(h_, firing_, kernel_, dt, integrator);
}

GridFunction apply_rate(const FiringRate& fr, const GridFunction& u) {
    std::vector<double> s(u.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = fr.value(u[i]);
    return GridFunction(u.grid(), std::move(s));
}

GridFunction drive(const FlowParams& p, const GridFunction& u) {
    require_same_grid(p.grid(), u.grid());
    return convolve(p.kernel(), apply_rate(p.firing(), u)) + p.h();
}

GridFunction rhs(const FlowParams& p, const GridFunction& u) { return drive(p, u) - u; }

namespace {

GridFunction etd1_from_drive(const FlowParams& p, const GridFunction& u, const GridFunction& n) {
    const double decay = std::exp(-p.dt());
    const double gain = -std::expm1(-p.dt());
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = decay * u[i] + gain * n[i];
    return GridFunction(u.grid(), std::move(out));
}

}  // namespace

GridFunction step_etd1(const FlowParams& p, const GridFunction& u) { return etd1_from_drive(p, u, drive(p, u)); }

GridFunction step_rk4(const FlowParams& p, const GridFunction& u) {
    const double dt = p.dt();
    const auto k1 = rhs(p, u);
    const auto k2 = rhs(p, u + (0.5 * dt) * k1);
    const auto k3 = rhs(p, u + (0.5 * dt) * k2);
    const auto k4 = rhs(p, u + dt * k3);
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = u[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return GridFunction(u.grid(), std::move(out));
}

GridFunction step(const FlowParams& p, const GridFunction& u) {
    return p.integrator() == Integrator::etd1 ? step_etd1(p, u) : step_rk4(p, u);
}

Trajectory simulate(const FlowParams& p, const GridFunction& u0, double T, const SimulateOptions& opts) {
    require_same_grid(p.grid(), u0.grid());
    if (!(T >= p.dt())) throw std::invalid_argument("simulate: T must be at least dt");
    const auto steps = static_cast<std::size_t>(std::ceil(T / p.dt() - 1e-9));
    const std::size_t stride = std::max<std::size_t>(1, opts.stride);

    Trajectory traj;
    traj.times.reserve(steps + 1);
    auto record = [&](std::size_t m, const GridFunction& u, const GridFunction& n) {
        const double t = static_cast<double>(m) * p.dt();
        double res = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) res = std::max(res, std::abs(n[i] - u[i]));
        traj.times.push_back(t);
        traj.l2_norm.push_back(l2_norm(u));
        traj.lyapunov.push_back(opts.lyapunov ? opts.lyapunov(u) : std::numeric_limits<double>::quiet_NaN());
        traj.residual.push_back(res);
        traj.min_u.push_back(u.min());
        traj.max_u.push_back(u.max());
        if (m % stride == 0 || m == steps) {
            traj.state_times.push_back(t);
            traj.states.push_back(u);
        }
    };

    GridFunction u = u0;
    for (std::size_t m = 0;; ++m) {
        GridFunction n = drive(p, u);
        record(m, u, n);
        if (m == steps) break;
        try {
            u = p.integrator() == Integrator::etd1 ? etd1_from_drive(p, u, n) : step_rk4(p, u);
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("simulate: state became non-finite at t=" +
                                     std::to_string(static_cast<double>(m + 1) * p.dt()));
        }
    }
    return traj;
}

AbsorbingRadius absorbing_radius(const FlowParams& p) {
    const double tau = p.grid().tau();
    const double r = 2.0 * tau * p.kernel().linf_norm() * FiringRate::s_max() + p.h();
    return {r, r * std::sqrt(2.0 * tau)};
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

GridFunction random_state(const CircleGrid& grid, double radius, std::mt19937_64& rng, std::size_t modes) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> a(modes + 1), b(modes + 1, 0.0);
    for (std::size_t k = 0; k <= modes; ++k) {
        a[k] = normal(rng);
        if (k > 0) b[k] = normal(rng);
    }
    const double r = radius * std::pow(uni(rng), 1.0 / static_cast<double>(2 * modes + 1));
    auto u = GridFunction::sample(grid, [&](double x) {
        double v = a[0];
        for (std::size_t k = 1; k <= modes; ++k) {
            const double arg = grid.wavenumber(static_cast<double>(k)) * x;
            v += a[k] * std::cos(arg) + b[k] * std::sin(arg);
        }
        return v;
    });
    const double norm = l2_norm(u);
    return norm > 0.0 ? (r / norm) * u : u;
}

}  // namespace nflab
