#include "nflab/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nflab/parallel.hpp"

namespace nflab {

namespace {

void require_nonempty(std::span<const GridFunction> A, std::span<const GridFunction> B) {
    if (A.empty() || B.empty()) throw std::domain_error("semidistance: empty set");
}

// Smallest sum of squared differences from a to any b; candidates are
// abandoned as soon as their partial sum exceeds the best so far.
double min_sq_distance(const GridFunction& a, std::span<const GridFunction> B) {
    const std::size_t n = a.size();
    const auto av = a.values();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : B) {
        require_same_grid(a, b);
        const auto bv = b.values();
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = av[i] - bv[i];
            s += d * d;
            if (s > best) break;
        }
        if (s < best) best = s;
    }
    return best;
}

std::size_t stride_for(double spacing, double dt) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spacing / dt)));
}

GridFunction seeded(const GridFunction& u0, double eps, const GridFunction& phi) { return u0 + eps * phi; }

// Points every `step` of L2 arc length along the polyline through the stored
// states, interpolating linearly inside a time step. Endpoints are kept.
void resample_arclength(const Trajectory& traj, double step, std::vector<double>& times,
                        std::vector<GridFunction>& states) {
    const auto& S = traj.states;
    const auto& T = traj.state_times;
    times.assign(1, T.front());
    states.assign(1, S.front());
    double carried = 0.0;  // arc length since the last emitted point
    for (std::size_t k = 0; k + 1 < S.size(); ++k) {
        const double len = l2_distance(S[k], S[k + 1]);
        double pos = step - carried;
        while (pos <= len) {
            const double theta = pos / len;
            states.push_back((1.0 - theta) * S[k] + theta * S[k + 1]);
            times.push_back(T[k] + theta * (T[k + 1] - T[k]));
            pos += step;
        }
        carried = len - (pos - step);
    }
    if (carried > 0.0) {
        states.push_back(S.back());
        times.push_back(T.back());
    }
}

}  // namespace

double semidistance_brute(std::span<const GridFunction> A, std::span<const GridFunction> B) {
    require_nonempty(A, B);
    double sup = 0.0;
    for (const auto& a : A) {
        double inf = std::numeric_limits<double>::infinity();
        for (const auto& b : B) inf = std::min(inf, l2_distance(a, b));
        sup = std::max(sup, inf);
    }
    return sup;
}

double semidistance(std::span<const GridFunction> A, std::span<const GridFunction> B) {
    require_nonempty(A, B);
    // sqrt(w s) is monotone in s under rounding, so taking the minimum over
    // squared sums first gives exactly the brute-force value.
    std::vector<double> inf(A.size());
    parallel_for(A.size(), [&](std::size_t i) { inf[i] = min_sq_distance(A[i], B); });
    const double w = A.front().grid().weight();
    double sup = 0.0;
    for (double s : inf) sup = std::max(sup, std::sqrt(w * s));
    return sup;
}

std::string to_string(Provenance::Kind kind) {
    switch (kind) {
        case Provenance::Kind::equilibrium: return "equilibrium";
        case Provenance::Kind::tail: return "tail";
        case Provenance::Kind::trace: return "trace";
        case Provenance::Kind::connection: return "connection";
    }
    return "unknown";
}

std::vector<ManifoldTrace> unstable_traces(const FlowParams& p, const Equilibrium& eq, double eps, double T,
                                           double arc_step, double hyp_tol) {
    if (!(eps > 0.0)) throw std::invalid_argument("unstable_traces: eps must be positive");
    if (!(arc_step > 0.0)) throw std::invalid_argument("unstable_traces: arc_step must be positive");
    const auto dirs = unstable_directions(p, eq, hyp_tol);
    std::vector<ManifoldTrace> traces(2 * dirs.size());
    SimulateOptions opts;
    opts.stride = 1;
    parallel_for(traces.size(), [&](std::size_t m) {
        const auto& dir = dirs[m / 2];
        const int sign = m % 2 == 0 ? 1 : -1;
        const auto traj = simulate(p, seeded(eq.state, sign * eps, dir.direction), T, opts);
        auto& tr = traces[m];
        tr.orbit_id = eq.orbit_id;
        tr.direction = dir.label;
        tr.sign = sign;
        tr.eps = eps;
        tr.eigenvalue = dir.eigenvalue;
        resample_arclength(traj, arc_step, tr.times, tr.states);
    });
    return traces;
}

std::vector<GridFunction> trace_unstable_manifold(const FlowParams& p, const Equilibrium& eq, double eps, double T,
                                                  double arc_step, double hyp_tol) {
    std::vector<GridFunction> out;
    for (auto& tr : unstable_traces(p, eq, eps, T, arc_step, hyp_tol)) {
        for (auto& s : tr.states) out.push_back(std::move(s));
    }
    return out;
}

std::vector<ConnectionTrace> trace_connections(const FlowParams& p, const Equilibrium& eq,
                                               std::span<const Equilibrium> others, const ConnectionSpec& spec) {
    const auto dirs = unstable_directions(p, eq, spec.hyp_tol);
    if (dirs.size() < 2 || others.size() < 2 || spec.scan < 2) return {};

    // Basin classification only needs the final state.
    SimulateOptions coarse;
    coarse.stride = std::numeric_limits<std::size_t>::max();
    SimulateOptions dense;
    dense.stride = 1;

    auto seed_for = [&](std::size_t i, std::size_t j, double angle) {
        const auto phi = std::cos(angle) * dirs[i].direction + std::sin(angle) * dirs[j].direction;
        return seeded(eq.state, spec.eps, phi);
    };
    auto nearest = [&](const GridFunction& u) {
        std::size_t best = 0;
        double d_best = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < others.size(); ++k) {
            const double d = orbit_distance(u, others[k].state);
            if (d < d_best) {
                d_best = d;
                best = k;
            }
        }
        return best;
    };

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        for (std::size_t j = i + 1; j < dirs.size(); ++j) pairs.emplace_back(i, j);
    }

    std::vector<std::vector<ConnectionTrace>> found(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t q) {
        const auto [i, j] = pairs[q];
        auto endpoint_class = [&](double angle) {
            return nearest(simulate(p, seed_for(i, j, angle), spec.T, coarse).final_state());
        };
        const double step = 2.0 * std::numbers::pi / static_cast<double>(spec.scan);
        std::vector<std::size_t> cls(spec.scan);
        for (std::size_t m = 0; m < spec.scan; ++m) cls[m] = endpoint_class(step * static_cast<double>(m));

        for (std::size_t m = 0; m < spec.scan; ++m) {
            const std::size_t next = (m + 1) % spec.scan;
            if (cls[m] == cls[next]) continue;
            double lo = step * static_cast<double>(m);
            double hi = lo + step;
            for (std::size_t b = 0; b < spec.bisections; ++b) {
                const double mid = 0.5 * (lo + hi);
                if (endpoint_class(mid) == cls[m]) lo = mid;
                else hi = mid;
            }
            const double angle = 0.5 * (lo + hi);
            auto traj = simulate(p, seed_for(i, j, angle), spec.T, dense);

            // The boundary orbit heads for an equilibrium other than the two basins it separates.
            ConnectionTrace ct;
            ct.closest_approach = std::numeric_limits<double>::infinity();
            std::size_t cut = 0;
            for (std::size_t k = 0; k < others.size(); ++k) {
                if (k == cls[m] || k == cls[next]) continue;
                for (std::size_t t = 0; t < traj.states.size(); ++t) {
                    const double d = orbit_distance(traj.states[t], others[k].state);
                    if (d < ct.closest_approach) {
                        ct.closest_approach = d;
                        ct.target_orbit = others[k].orbit_id;
                        cut = t;
                    }
                }
            }
            if (ct.target_orbit < 0) continue;
            ct.angle = angle;
            ct.trace.orbit_id = eq.orbit_id;
            ct.trace.direction = dirs[i].label + "+" + dirs[j].label;
            ct.trace.sign = 1;
            ct.trace.eps = spec.eps;
            ct.trace.eigenvalue = dirs[i].eigenvalue;
            traj.state_times.resize(cut + 1);
            traj.states.erase(traj.states.begin() + static_cast<std::ptrdiff_t>(cut) + 1, traj.states.end());
            resample_arclength(traj, spec.arc_step, ct.trace.times, ct.trace.states);
            found[q].push_back(std::move(ct));
        }
    });

    std::vector<ConnectionTrace> out;
    for (auto& f : found) {
        for (auto& c : f) out.push_back(std::move(c));
    }
    return out;
}

double trace_eps(const FlowParams& p, const SpectrumReport& spectrum) {
    const double gap = spectrum.zero_index && spectrum.zero_is_simple ? spectrum.next_nearest : spectrum.nearest_zero;
    return std::min(1e-3 * absorbing_radius(p).l2, 0.1 * gap);
}

AttractorSample sample_attractor(const FlowParams& p, const EquilibriumSet& equilibria, const SamplingSpec& spec) {
    if (equilibria.orbits.size() != equilibria.spectra.size()) {
        throw std::invalid_argument("sample_attractor: equilibria without spectra");
    }
    const auto& grid = p.grid();
    const auto radius = absorbing_radius(p);
    const double arc_step = spec.trace_arc_step > 0.0 ? spec.trace_arc_step : 1e-3 * radius.l2;
    AttractorSample out;

    auto add = [&](const GridFunction& u, Provenance prov) {
        if (l2_norm(u) > radius.l2 * (1.0 + 1e-12)) {
            ++out.dropped_outside_ball;
            return;
        }
        out.points.push_back(u);
        out.provenance.push_back(std::move(prov));
    };

    if (spec.include_equilibria) {
        for (const auto& eq : equilibria.orbits) {
            for (const auto& r : rotation_orbit(p, eq)) {
                Provenance prov;
                prov.kind = Provenance::Kind::equilibrium;
                prov.orbit_id = eq.orbit_id;
                add(r.state, prov);
            }
        }
    }

    // Tails: states at t >= burn_in on trajectories from the absorbing ball.
    if (spec.n_ic > 0 && spec.tail_count > 0) {
        SimulateOptions opts;
        opts.stride = stride_for(spec.tail_spacing, p.dt());
        const double T = spec.burn_in + static_cast<double>(spec.tail_count - 1) * spec.tail_spacing;
        std::vector<Trajectory> runs(spec.n_ic);
        parallel_for(spec.n_ic, [&](std::size_t i) {
            std::mt19937_64 rng(derive_seed(spec.seed, 0, i));
            runs[i] = simulate(p, random_state(grid, radius.l2, rng), std::max(T, p.dt()), opts);
        });
        for (std::size_t i = 0; i < runs.size(); ++i) {
            const auto& r = runs[i];
            for (std::size_t k = 0; k < r.states.size(); ++k) {
                if (r.state_times[k] < spec.burn_in - 1e-9) continue;
                Provenance prov;
                prov.kind = Provenance::Kind::tail;
                prov.ic = i;
                prov.time = r.state_times[k];
                add(r.states[k], prov);
            }
        }
    }

    for (std::size_t e = 0; e < equilibria.orbits.size(); ++e) {
        const auto& eq = equilibria.orbits[e];
        const auto& sp = equilibria.spectra[e];
        if (sp.unstable_count == 0) continue;
        const double eps = trace_eps(p, sp);
        if (!(eps > 0.0)) continue;
        for (const auto& tr : unstable_traces(p, eq, eps, spec.trace_time, arc_step, spec.hyp_tol)) {
            for (std::size_t k = 0; k < tr.states.size(); ++k) {
                Provenance prov;
                prov.kind = Provenance::Kind::trace;
                prov.orbit_id = eq.orbit_id;
                prov.direction = tr.direction;
                prov.sign = tr.sign;
                prov.eps = eps;
                prov.time = tr.times[k];
                add(tr.states[k], prov);
            }
        }
        if (!spec.connections) continue;
        std::vector<Equilibrium> others;
        for (const auto& o : equilibria.orbits) {
            if (o.orbit_id != eq.orbit_id) others.push_back(o);
        }
        ConnectionSpec cs;
        cs.eps = eps;
        cs.T = spec.trace_time;
        cs.arc_step = arc_step;
        cs.hyp_tol = spec.hyp_tol;
        for (const auto& ct : trace_connections(p, eq, others, cs)) {
            for (std::size_t k = 0; k < ct.trace.states.size(); ++k) {
                Provenance prov;
                prov.kind = Provenance::Kind::connection;
                prov.orbit_id = eq.orbit_id;
                prov.direction = ct.trace.direction;
                prov.target_orbit = ct.target_orbit;
                prov.eps = eps;
                prov.time = ct.trace.times[k];
                add(ct.trace.states[k], prov);
            }
        }
    }

    std::ostringstream fp;
    fp.precision(17);
    fp << "kernel=" << p.kernel().profile().label() << ";tau=" << grid.tau() << ";n=" << grid.size()
       << ";beta=" << p.firing().beta() << ";theta=" << p.firing().theta() << ";h=" << p.h() << ";dt=" << p.dt()
       << ";integrator=" << to_string(p.integrator()) << ";seed=" << spec.seed << ";n_ic=" << spec.n_ic
       << ";burn_in=" << spec.burn_in << ";tail_count=" << spec.tail_count << ";trace_time=" << spec.trace_time << ";arc_step=" << arc_step;
    out.fingerprint = fp.str();
    return out;
}

std::pair<double, double> equilibrium_set_distance(std::span<const Equilibrium> E0, std::span<const Equilibrium> E1) {
    auto expand = [](std::span<const Equilibrium> E) {
        std::vector<GridFunction> pts;
        for (const auto& e : E) {
            if (e.kind == EquilibriumKind::constant) {
                pts.push_back(e.state);
                continue;
            }
            for (std::size_t k = 0; k < e.state.size(); ++k) pts.push_back(rotate(e.state, static_cast<std::int64_t>(k)));
        }
        return pts;
    };
    const auto A = expand(E0);
    const auto B = expand(E1);
    return {semidistance(A, B), semidistance(B, A)};
}

namespace {

// A constant equilibrium with an eigenvalue at zero, or a rotation orbit
// whose zero mode is not simple, marks a bifurcation point.
std::string bifurcation_reason(const EquilibriumSet& set) {
    for (std::size_t i = 0; i < set.orbits.size(); ++i) {
        const auto& sp = set.spectra[i];
        const bool constant = set.orbits[i].kind == EquilibriumKind::constant;
        if (constant ? !sp.hyperbolic : !sp.zero_is_simple) {
            return "bifurcation point: orbit " + std::to_string(set.orbits[i].orbit_id) +
                   (constant ? " is not hyperbolic" : " has a degenerate zero mode");
        }
    }
    return {};
}

}  // namespace

ContinuityReport continuity_sweep(const FlowParams& base, const std::vector<SweepMember>& family,
                                  const SweepSpec& spec) {
    if (family.empty()) throw std::invalid_argument("continuity_sweep: empty family");
    if (l1_distance(make_kernel(family.back().profile, base.grid()), base.kernel()) != 0.0) {
        throw std::invalid_argument("continuity_sweep: the last family member must be the base kernel");
    }
    ContinuityReport report;

    const auto E0 = find_equilibria(base, spec.multistart);
    if (const auto why = bifurcation_reason(E0); !why.empty()) {
        throw std::invalid_argument("continuity_sweep: base parameters at a " + why);
    }
    const auto A0 = sample_attractor(base, E0, spec.sampling);

    std::vector<GridFunction> warm;
    for (const auto& e : E0.orbits) warm.push_back(e.state);

    // Sampling noise: the same base run with fresh seeds. Warm starts pin the
    // phase of nonconstant orbits so only the random parts differ.
    {
        auto ms = spec.multistart;
        ms.seed = derive_seed(spec.multistart.seed, 1);
        ms.warm_starts = warm;
        auto ss = spec.sampling;
        ss.seed = derive_seed(spec.sampling.seed, 1);
        const auto E1 = find_equilibria(base, ms);
        const auto A1 = sample_attractor(base, E1, ss);
        const auto [e_f, e_b] = equilibrium_set_distance(E0.orbits, E1.orbits);
        const double a_f = semidistance(A0.points, A1.points);
        const double a_b = semidistance(A1.points, A0.points);
        report.measured_floor = std::max({e_f, e_b, a_f, a_b});
        report.floor = std::max(report.measured_floor, spec.floor_min);
    }

    for (std::size_t m = 0; m < family.size(); ++m) {
        ContinuityRow row;
        row.s = family[m].s;
        try {
            const auto p = base.with_kernel(make_kernel(family[m].profile, base.grid()));
            row.l1_dist = l1_distance(p.kernel(), base.kernel());
            auto ms = spec.multistart;
            ms.seed = derive_seed(spec.multistart.seed, 2 + m);
            ms.warm_starts = warm;
            auto ss = spec.sampling;
            ss.seed = derive_seed(spec.sampling.seed, 2 + m);
            const auto E = find_equilibria(p, ms);
            row.n_orbits = E.orbits.size();
            if (const auto why = bifurcation_reason(E); !why.empty()) throw std::runtime_error(why);
            const auto A = sample_attractor(p, E, ss);
            std::tie(row.dE_fwd, row.dE_bwd) = equilibrium_set_distance(E0.orbits, E.orbits);
            row.dA_fwd = semidistance(A0.points, A.points);
            row.dA_bwd = semidistance(A.points, A0.points);
        } catch (const std::exception& ex) {
            row.ok = false;
            row.error = ex.what();
        }
        report.rows.push_back(std::move(row));
    }

    auto monotone = [&](double ContinuityRow::*col) {
        const ContinuityRow* prev = nullptr;
        for (const auto& r : report.rows) {
            if (!r.ok) continue;
            if (prev && r.*col > prev->*col + report.floor) return false;
            prev = &r;
        }
        return prev != nullptr;
    };
    report.monotone_dE_fwd = monotone(&ContinuityRow::dE_fwd);
    report.monotone_dE_bwd = monotone(&ContinuityRow::dE_bwd);
    report.monotone_dA_fwd = monotone(&ContinuityRow::dA_fwd);
    report.monotone_dA_bwd = monotone(&ContinuityRow::dA_bwd);
    return report;
}

}  // namespace nflab
