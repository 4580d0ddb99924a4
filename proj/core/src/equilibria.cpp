#include "nflab/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "nflab/parallel.hpp"

namespace nflab {

std::string to_string(EquilibriumKind kind) {
    return kind == EquilibriumKind::constant ? "constant" : "nonconstant";
}

EquilibriumKind classify(const GridFunction& u) {
    // Ties go to nonconstant so that the orbit machinery runs.
    return u.max() - u.min() < kConstantSpread ? EquilibriumKind::constant : EquilibriumKind::nonconstant;
}

namespace {

double sup_residual(const FlowParams& p, const GridFunction& u) { return linf_norm(rhs(p, u)); }

Equilibrium make_equilibrium(const FlowParams& p, GridFunction u) {
    const double res = sup_residual(p, u);
    const auto kind = classify(u);
    return Equilibrium{std::move(u), res, kind, -1};
}

Eigen::VectorXd rate_slopes(const FlowParams& p, const GridFunction& u) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(u.size()));
    for (std::size_t i = 0; i < u.size(); ++i) d[static_cast<Eigen::Index>(i)] = p.firing().derivative(u[i], 1);
    return d;
}

struct SymmetricEigs {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns, eigenvectors of the symmetrized matrix
    Eigen::VectorXd sqrt_d;
};

SymmetricEigs symmetric_eigs(const FlowParams& p, const GridFunction& u0) {
    require_same_grid(p.grid(), u0.grid());
    const Eigen::VectorXd d = rate_slopes(p, u0);
    if ((d.array() <= 0.0).any()) {
        throw std::domain_error("spectrum: symmetrization needs f'(u0) > 0 everywhere");
    }
    const Eigen::VectorXd sd = d.array().sqrt();
    const Eigen::MatrixXd C = convolution_matrix(p.kernel());
    Eigen::MatrixXd S = sd.asDiagonal() * C * sd.asDiagonal();
    S = 0.5 * (S + S.transpose());
    S.diagonal().array() -= 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
    if (solver.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors(), sd};
}

GridFunction to_direction(const CircleGrid& grid, const Eigen::VectorXd& y, const Eigen::VectorXd& sd) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        v[i] = y[ii] / sd[ii];
    }
    // Fix the sign so that runs with nearby parameters pick the same orientation.
    double sum = std::accumulate(v.begin(), v.end(), 0.0);
    if (std::abs(sum) < 1e-10 * static_cast<double>(v.size())) {
        const auto it = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
        sum = *it;
    }
    GridFunction g(grid, std::move(v));
    const double scale = (sum < 0.0 ? -1.0 : 1.0) / l2_norm(g);
    return scale * g;
}

Eigen::VectorXd to_eigen(const GridFunction& u) {
    return Eigen::Map<const Eigen::VectorXd>(u.values().data(), static_cast<Eigen::Index>(u.size()));
}

}  // namespace

std::vector<Equilibrium> solve_constant(const FlowParams& p) {
    const auto& fr = p.firing();
    const double h = p.h();
    auto g = [&](double c) { return c - fr.value(c) - h; };
    auto dg = [&](double c) { return 1.0 - fr.derivative(c, 1); };

    auto refine = [&](double a, double b) {
        double ga = g(a);
        for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
            const double m = 0.5 * (a + b);
            const double gm = g(m);
            if (gm == 0.0) return m;
            if ((gm < 0.0) == (ga < 0.0)) {
                a = m;
                ga = gm;
            } else {
                b = m;
            }
        }
        double c = 0.5 * (a + b);
        for (int it = 0; it < 3; ++it) {
            const double slope = dg(c);
            if (slope == 0.0) break;
            const double next = c - g(c) / slope;
            if (!(next >= a && next <= b)) break;
            c = next;
        }
        return c;
    };

    const double lo = h;
    const double hi = h + FiringRate::s_max();
    const int cells = 4096;
    std::vector<double> roots;
    double x_prev = lo;
    double g_prev = g(lo);
    for (int i = 1; i <= cells; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / cells;
        const double gx = g(x);
        if (g_prev == 0.0) {
            roots.push_back(x_prev);
        } else if ((g_prev < 0.0) != (gx < 0.0) && gx != 0.0) {
            roots.push_back(refine(x_prev, x));
        } else if (gx == 0.0 && i == cells) {
            roots.push_back(x);
        }
        x_prev = x;
        g_prev = gx;
    }

    std::vector<Equilibrium> out;
    for (double c : roots) out.push_back(make_equilibrium(p, GridFunction::constant(p.grid(), c)));
    return out;
}

Eigen::MatrixXd convolution_matrix(const Kernel& J) {
    const auto n = static_cast<Eigen::Index>(J.grid().size());
    const auto K = J.offsets();
    const double w = J.grid().weight();
    Eigen::MatrixXd C(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) C(i, j) = w * K[static_cast<std::size_t>((i - j + n) % n)];
    }
    return C;
}

Eigen::MatrixXd linearization_matrix(const FlowParams& p, const GridFunction& u0) {
    require_same_grid(p.grid(), u0.grid());
    const Eigen::VectorXd d = rate_slopes(p, u0);
    Eigen::MatrixXd A = convolution_matrix(p.kernel()) * d.asDiagonal();
    A.diagonal().array() -= 1.0;
    return A;
}

std::vector<double> constant_spectrum(const FlowParams& p, double c) {
    const double slope = p.firing().derivative(c, 1);
    const auto mult = p.kernel().multipliers();
    std::vector<double> out(mult.size());
    for (std::size_t k = 0; k < mult.size(); ++k) out[k] = -1.0 + slope * mult[k];
    return out;
}

SpectrumReport spectrum(const FlowParams& p, const GridFunction& u0, const SpectrumOptions& opts) {
    const auto eigs = symmetric_eigs(p, u0);
    const auto n = eigs.values.size();

    SpectrumReport rep;
    rep.eigenvalues.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) rep.eigenvalues[static_cast<std::size_t>(i)] = eigs.values[n - 1 - i];

    std::vector<std::size_t> by_abs(rep.eigenvalues.size());
    std::iota(by_abs.begin(), by_abs.end(), 0);
    std::stable_sort(by_abs.begin(), by_abs.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(rep.eigenvalues[a]) < std::abs(rep.eigenvalues[b]);
    });
    const std::size_t nearest = by_abs[0];
    rep.nearest_zero = std::abs(rep.eigenvalues[nearest]);
    rep.next_nearest = by_abs.size() > 1 ? std::abs(rep.eigenvalues[by_abs[1]]) : std::numeric_limits<double>::infinity();
    if (rep.nearest_zero <= opts.zero_tol) rep.zero_index = nearest;
    rep.zero_is_simple = rep.nearest_zero <= opts.zero_tol && rep.next_nearest >= opts.gap_tol;
    rep.hyperbolic = rep.nearest_zero >= opts.hyp_tol;
    rep.unstable_count = static_cast<std::size_t>(
        std::count_if(rep.eigenvalues.begin(), rep.eigenvalues.end(), [&](double l) { return l > opts.hyp_tol; }));

    rep.eigvec_alignment = std::numeric_limits<double>::quiet_NaN();
    if (classify(u0) == EquilibriumKind::nonconstant) {
        const Eigen::Index col = n - 1 - static_cast<Eigen::Index>(nearest);
        const Eigen::VectorXd v = eigs.vectors.col(col).cwiseQuotient(eigs.sqrt_d);
        Eigen::VectorXd t = to_eigen(spectral_derivative(u0));
        t.normalize();
        const double along = v.dot(t);
        const double across = (v - along * t).norm();
        rep.eigvec_alignment = std::atan2(across, std::abs(along));
    }
    return rep;
}

std::vector<UnstableDirection> unstable_directions(const FlowParams& p, const Equilibrium& eq, double hyp_tol) {
    const auto& grid = p.grid();
    std::vector<UnstableDirection> dirs;
    if (eq.kind == EquilibriumKind::constant) {
        const auto lambdas = constant_spectrum(p, eq.state[0]);
        const std::size_t half = grid.size() / 2;
        for (std::size_t k = 0; k < lambdas.size(); ++k) {
            if (!(lambdas[k] > hyp_tol)) continue;
            const double om = grid.wavenumber(static_cast<double>(k));
            auto cosk = GridFunction::sample(grid, [om](double x) { return std::cos(om * x); });
            dirs.push_back({lambdas[k], (1.0 / l2_norm(cosk)) * cosk, "k" + std::to_string(k) + (k ? "c" : "")});
            if (k > 0 && k < half) {
                auto sink = GridFunction::sample(grid, [om](double x) { return std::sin(om * x); });
                dirs.push_back({lambdas[k], (1.0 / l2_norm(sink)) * sink, "k" + std::to_string(k) + "s"});
            }
        }
        std::stable_sort(dirs.begin(), dirs.end(),
                         [](const auto& a, const auto& b) { return a.eigenvalue > b.eigenvalue; });
        return dirs;
    }
    const auto eigs = symmetric_eigs(p, eq.state);
    const auto n = eigs.values.size();
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        if (!(eigs.values[i] > hyp_tol)) break;
        dirs.push_back({eigs.values[i], to_direction(grid, eigs.vectors.col(i), eigs.sqrt_d),
                        "e" + std::to_string(n - 1 - i)});
    }
    return dirs;
}

NewtonResult newton_solve(const FlowParams& p, const GridFunction& guess, const NewtonOptions& opts) {
    require_same_grid(p.grid(), guess.grid());
    const auto n = static_cast<Eigen::Index>(guess.size());
    const Eigen::MatrixXd C = convolution_matrix(p.kernel());

    NewtonResult result{Equilibrium{guess, 0.0, classify(guess), -1}, false, 0, {}};
    GridFunction u = guess;
    GridFunction r = rhs(p, u);
    double res = linf_norm(r);
    for (int it = 0;; ++it) {
        result.history.push_back(res);
        result.iterations = it;
        if (res <= opts.tol) {
            result.converged = true;
            break;
        }
        if (it >= opts.max_iter) break;

        Eigen::MatrixXd A = C * rate_slopes(p, u).asDiagonal();
        A.diagonal().array() -= 1.0;
        const Eigen::VectorXd rhs_vec = -to_eigen(r);
        Eigen::VectorXd delta;
        if (classify(u) == EquilibriumKind::nonconstant) {
            Eigen::VectorXd t = to_eigen(spectral_derivative(u));
            t.normalize();
            Eigen::MatrixXd M(n + 1, n + 1);
            M.topLeftCorner(n, n) = A;
            M.topRightCorner(n, 1) = t;
            M.bottomLeftCorner(1, n) = t.transpose();
            M(n, n) = 0.0;
            Eigen::VectorXd b(n + 1);
            b.head(n) = rhs_vec;
            b(n) = 0.0;
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
            if (lu.rcond() > 1e-13) {
                delta = lu.solve(b).head(n);
            } else {
                // Degenerate bordering: minimum-norm step in the complement of u'.
                Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - t * t.transpose();
                delta = P * Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(A * P).solve(rhs_vec);
            }
        } else {
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
            if (lu.rcond() > 1e-13) {
                delta = lu.solve(rhs_vec);
            } else {
                delta = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(A).solve(rhs_vec);
            }
        }
        if (!delta.allFinite()) break;

        // Backtracking on the sup residual.
        double lambda = 1.0;
        GridFunction trial = u;
        GridFunction trial_r = r;
        double trial_res = res;
        for (int ls = 0; ls < 30; ++ls) {
            std::vector<double> v(u.size());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = u[i] + lambda * delta[static_cast<Eigen::Index>(i)];
            trial = GridFunction(u.grid(), std::move(v));
            trial_r = rhs(p, trial);
            trial_res = linf_norm(trial_r);
            if (trial_res < (1.0 - 1e-4 * lambda) * res) break;
            lambda *= 0.5;
        }
        u = std::move(trial);
        r = std::move(trial_r);
        res = trial_res;
    }
    result.eq = Equilibrium{u, res, classify(u), -1};
    return result;
}

std::vector<Equilibrium> rotation_orbit(const FlowParams& p, const Equilibrium& eq) {
    if (eq.kind == EquilibriumKind::constant) return {eq};
    const auto n = static_cast<std::int64_t>(eq.state.size());
    std::vector<Equilibrium> orbit;
    orbit.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        auto member = make_equilibrium(p, rotate(eq.state, k));
        if (member.residual > eq.residual + 1e-13) {
            throw std::logic_error("rotation_orbit: rotated state lost equilibrium residual");
        }
        member.orbit_id = eq.orbit_id;
        orbit.push_back(std::move(member));
    }
    return orbit;
}

double orbit_distance(const GridFunction& u, const GridFunction& v) {
    require_same_grid(u, v);
    const std::size_t n = u.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < n && s < best; ++i) {
            const double d = u[i] - v[(i + k) % n];
            s += d * d;
        }
        best = std::min(best, s);
    }
    return std::sqrt(u.grid().weight() * best);
}

EquilibriumSet find_equilibria(const FlowParams& p, const MultistartSpec& spec) {
    const auto& grid = p.grid();
    const auto constants = solve_constant(p);

    std::vector<GridFunction> guesses;
    for (const auto& c : constants) guesses.push_back(c.state);
    for (const auto& w : spec.warm_starts) guesses.push_back(w);
    const std::size_t kmax = std::min(spec.kmax, grid.size() / 2 - 1);
    for (std::size_t i = 0; i < spec.seeds; ++i) {
        for (std::size_t r = 0; r < constants.size(); ++r) {
            const double c = constants[r].state[0];
            const auto lambdas = constant_spectrum(p, c);
            for (std::size_t k = 1; k <= kmax; ++k) {
                if (!(lambdas[k] > 0.0)) continue;
                std::mt19937_64 rng(derive_seed(spec.seed, r * 1024 + k, i));
                const double amp = spec.amp_min + (spec.amp_max - spec.amp_min) *
                                                      std::uniform_real_distribution<double>(0.0, 1.0)(rng);
                const double om = grid.wavenumber(static_cast<double>(k));
                guesses.push_back(GridFunction::sample(grid, [&](double x) { return c + amp * std::cos(om * x); }));
            }
        }
    }

    std::vector<std::optional<NewtonResult>> results(guesses.size());
    parallel_for(guesses.size(), [&](std::size_t i) { results[i] = newton_solve(p, guesses[i], spec.newton); });

    EquilibriumSet set;
    set.attempts = guesses.size();
    for (auto& slot : results) {
        auto& res = *slot;
        if (!res.converged) continue;
        ++set.converged;
        const bool known = std::any_of(set.orbits.begin(), set.orbits.end(), [&](const Equilibrium& e) {
            if (e.kind != res.eq.kind) return false;
            const double d = e.kind == EquilibriumKind::constant ? l2_distance(e.state, res.eq.state)
                                                                  : orbit_distance(e.state, res.eq.state);
            return d <= spec.dedupe_tol;
        });
        if (known) continue;
        res.eq.orbit_id = static_cast<int>(set.orbits.size());
        set.orbits.push_back(std::move(res.eq));
    }

    set.spectra.resize(set.orbits.size());
    parallel_for(set.orbits.size(), [&](std::size_t i) {
        set.spectra[i] = spectrum(p, set.orbits[i].state, spec.spectrum);
    });
    return set;
}

std::optional<double> turing_scan(const FlowParams& p, const std::vector<double>& h_values, double margin,
                                  std::size_t mode) {
    if (mode == 0 || mode >= p.grid().size() / 2) throw std::invalid_argument("turing_scan: bad mode");
    for (double h : h_values) {
        const auto q = p.with_h(h);
        for (const auto& c : solve_constant(q)) {
            if (constant_spectrum(q, c.state[0])[mode] >= margin) return h;
        }
    }
    return std::nullopt;
}

}  // namespace nflab
