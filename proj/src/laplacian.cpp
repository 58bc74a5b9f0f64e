#include "kslab/laplacian.hpp"

#include <algorithm>
#include <cmath>

namespace kslab {

namespace {

Real signed_pow_floored(Real d, Real p, Real delta) {
    if (p >= 2.0 || d == 0.0) return signed_pow(d, p);
    const Real a = std::max(std::abs(d), delta);
    if (p == 1.5) return d / std::sqrt(a);
    return std::pow(a, p - 2.0) * d;
}

std::vector<Real> laplacian_values(const PointCloudSpace& space, const std::vector<Real>& f,
                                   Real p, Real r, const BallCache& cache, Real delta) {
    const Index n = space.size();
    std::vector<Real> out(static_cast<std::size_t>(n));
    const Real rp = abs_pow(r, p);
#pragma omp parallel for schedule(static)
    for (Index x = 0; x < n; ++x) {
        const Real fx = f[static_cast<std::size_t>(x)];
        const Real inv_mx = 1.0 / cache.ball_mass[static_cast<std::size_t>(x)];
        CompensatedSum acc;
        for (Index y : cache.nbrs[static_cast<std::size_t>(x)]) {
            const Real df = fx - f[static_cast<std::size_t>(y)];
            if (df == 0.0) continue;
            const Real coef = inv_mx + 1.0 / cache.ball_mass[static_cast<std::size_t>(y)];
            acc.add(space.weight(y) * coef * signed_pow_floored(df, p, delta));
        }
        out[static_cast<std::size_t>(x)] = -acc.get() / rp;
    }
    return out;
}

} // namespace

ScalarField p_laplacian(const PointCloudSpace& space, const ScalarField& f, Real p, Real r,
                        const BallCache* cache) {
    require_bound(space, f, "p_laplacian");
    if (!(p > 1.0)) throw ExponentNotAboveOne("p_laplacian: requires p > 1");
    space.require_scale(r, "p_laplacian");
    BallCache local;
    if (!cache) {
        local = BallCache::build(space, r);
        cache = &local;
    }
    return bind_field(space, laplacian_values(space, f.values, p, r, *cache, 0.0));
}

SolveReport dirichlet_solve(const PointCloudSpace& space, const DirichletProblem& problem,
                            const SolveConfig& config, const ScalarField* warm_start) {
    if (problem.boundary.empty()) throw InfeasibleBoundary("dirichlet_solve: empty boundary");
    if (problem.boundary_values.size() != problem.boundary.ids.size())
        throw config_error("dirichlet_solve: boundary values misaligned");
    for (Real v : problem.boundary_values)
        if (!std::isfinite(v)) throw config_error("dirichlet_solve: non-finite boundary value");
    if (!(problem.p > 1.0)) throw ExponentNotAboveOne("dirichlet_solve: requires p > 1");
    if (!(config.tol > 0.0) || !(config.grad_tol > 0.0))
        throw config_error("dirichlet_solve: tolerances must be positive");
    space.require_scale(problem.r, "dirichlet_solve");

    const Index n = space.size();
    const Real p = problem.p;
    const Real delta = p < 2.0 ? config.delta : 0.0;

    SolveReport rep;
    rep.smoothing_delta = delta;

    // Initial iterate: boundary data on the boundary, its mean elsewhere.
    std::vector<Real> fvals(static_cast<std::size_t>(n));
    if (warm_start) {
        require_bound(space, *warm_start, "dirichlet_solve warm start");
        fvals = warm_start->values;
    } else {
        Real mean = 0.0;
        for (Real v : problem.boundary_values) mean += v;
        mean /= static_cast<Real>(problem.boundary_values.size());
        std::fill(fvals.begin(), fvals.end(), mean);
    }
    for (std::size_t k = 0; k < problem.boundary.ids.size(); ++k)
        fvals[static_cast<std::size_t>(problem.boundary.ids[k])] = problem.boundary_values[k];

    const IndexSet interior = problem.boundary.complement(n);
    const BallCache cache = BallCache::build(space, problem.r);

    auto energy_of = [&](const std::vector<Real>& v) {
        ScalarField tmp{v, space.id()};
        return ks_energy(space, tmp, p, problem.r, &cache).value;
    };

    Real energy = energy_of(fvals);
    if (config.record_history) rep.energy_history.push_back(energy);

    if (interior.empty()) {
        rep.minimizer = ScalarField{std::move(fvals), space.id()};
        rep.final_energy = energy;
        rep.converged = true;
        rep.stop_reason = "no free variables";
        return rep;
    }

    const Real energy_scale = std::max(energy, 1e-300);
    Real step = 1.0;
    std::vector<Real> trial(fvals.size());
    std::string stop = "max iterations";
    bool converged = false;
    int iter = 0;

    for (; iter < config.max_iters; ++iter) {
        const std::vector<Real> lap = laplacian_values(space, fvals, p, problem.r, cache, delta);
        // grad E wrt f(z) = -p mu_z Dp f(z) on the interior
        Real gnorm2 = 0.0;
        std::vector<Real> grad(interior.ids.size());
        for (std::size_t k = 0; k < interior.ids.size(); ++k) {
            const Index z = interior.ids[k];
            grad[k] = -p * space.weight(z) * lap[static_cast<std::size_t>(z)];
            gnorm2 += grad[k] * grad[k];
        }
        rep.final_grad_norm = std::sqrt(gnorm2);
        if (rep.final_grad_norm < config.grad_tol) {
            converged = true;
            stop = "gradient norm below tolerance";
            break;
        }

        step = std::min(step * 2.0, 1e12);
        bool accepted = false;
        Real trial_energy = energy;
        while (step > 1e-18) {
            trial = fvals;
            for (std::size_t k = 0; k < interior.ids.size(); ++k)
                trial[static_cast<std::size_t>(interior.ids[k])] -= step * grad[k];
            trial_energy = energy_of(trial);
            if (trial_energy <= energy - 1e-4 * step * gnorm2) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            stop = "line search failed";
            break;
        }
        const Real rel_dec = (energy - trial_energy) / energy_scale;
        fvals.swap(trial);
        energy = trial_energy;
        rep.final_rel_decrease = rel_dec;
        if (config.record_history) rep.energy_history.push_back(energy);
        if (rel_dec < config.tol) {
            converged = true;
            stop = "relative energy decrease below tolerance";
            ++iter;
            break;
        }
    }

    rep.minimizer = ScalarField{std::move(fvals), space.id()};
    rep.final_energy = energy;
    rep.iterations = iter;
    rep.converged = converged;
    rep.stop_reason = stop;
    return rep;
}

DirichletProblem end_collar_problem(const PointCloudSpace& space, Real v_lo, Real v_hi, Real p,
                                    Real r, Real width) {
    if (space.metric() == MetricKind::DistanceTable)
        throw config_error("end_collar_problem: needs point coordinates");
    if (width <= 0.0) width = r;
    Real cmin = space.coord(0, 0), cmax = space.coord(0, 0);
    for (Index i = 1; i < space.size(); ++i) {
        cmin = std::min(cmin, space.coord(i, 0));
        cmax = std::max(cmax, space.coord(i, 0));
    }
    const Real span = std::max(cmax - cmin, 1e-300);
    DirichletProblem prob;
    prob.p = p;
    prob.r = r;
    std::vector<Index> ids;
    std::vector<Real> vals;
    for (Index i = 0; i < space.size(); ++i) {
        const Real x = space.coord(i, 0);
        if (x < cmin + width || x > cmax - width) {
            ids.push_back(i);
            vals.push_back(v_lo + (v_hi - v_lo) * (x - cmin) / span);
        }
    }
    prob.boundary = IndexSet(std::move(ids));
    prob.boundary_values = std::move(vals);
    return prob;
}

std::vector<SweepEntry> minimizer_sweep(const PointCloudSpace& space,
                                        const DirichletProblem& problem_template,
                                        std::span<const Real> radii, const SolveConfig& config,
                                        const ScalarField* reference) {
    return minimizer_sweep(
        space,
        [&](Real r) {
            DirichletProblem prob = problem_template;
            prob.r = r;
            return prob;
        },
        radii, config, reference);
}

std::vector<SweepEntry> minimizer_sweep(const PointCloudSpace& space,
                                        const std::function<DirichletProblem(Real)>& problem_at,
                                        std::span<const Real> radii, const SolveConfig& config,
                                        const ScalarField* reference) {
    if (radii.empty()) throw config_error("minimizer_sweep: empty radius list");
    for (std::size_t k = 1; k < radii.size(); ++k)
        if (!(radii[k] < radii[k - 1]))
            throw config_error("minimizer_sweep: radii must be strictly decreasing");

    std::vector<SweepEntry> out;
    const ScalarField* warm = nullptr;
    for (Real r : radii) {
        const DirichletProblem prob = problem_at(r);
        SweepEntry entry;
        entry.r = r;
        entry.report = dirichlet_solve(space, prob, config, warm);
        if (!out.empty())
            entry.dist_prev = sup_distance(entry.report.minimizer, out.back().report.minimizer);
        if (reference)
            entry.dist_reference = sup_distance(entry.report.minimizer, *reference);
        out.push_back(std::move(entry));
        warm = &out.back().report.minimizer;
    }
    return out;
}

} // namespace kslab
