#include "frozenrb/freezing.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

namespace frozenrb {

LieAlgebraVec solve_phase_system(const Eigen::Matrix2d& A, const Eigen::Vector2d& rhs,
                                 PhaseSolveInfo* info) {
    const double tr = A.trace();
    const double det = A.determinant();
    const bool regular = det > 1e-12 * tr * tr / 4.0;

    // eigenvalues of the symmetric 2x2 for the condition estimate
    const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
    const double lmax = 0.5 * (tr + disc);
    const double lmin = 0.5 * (tr - disc);
    const double cond = (lmin > 0.0) ? lmax / lmin : std::numeric_limits<double>::infinity();

    Eigen::Vector2d x = Eigen::Vector2d::Zero();
    if (regular) {
        x[0] = (rhs[0] * A(1, 1) - rhs[1] * A(0, 1)) / det;
        x[1] = (rhs[1] * A(0, 0) - rhs[0] * A(1, 0)) / det;
    } else if (lmax > 0.0) {
        // minimum-norm least-squares via spectral pseudo-inverse
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(A);
        const double cutoff = 1e-12 * es.eigenvalues()[1];
        for (int k = 0; k < 2; ++k) {
            const double lam = es.eigenvalues()[k];
            if (lam > cutoff)
                x += es.eigenvectors().col(k) * (es.eigenvectors().col(k).dot(rhs) / lam);
        }
    }
    // A == 0 keeps x = 0, the minimum-norm solution

    if (info) {
        info->alg = {x[0], x[1]};
        info->degenerate = !regular;
        info->cond = cond;
        info->gram = A;
        info->rhs = rhs;
    }
    return {x[0], x[1]};
}

LieAlgebraVec phase_condition_solve(const Field& v, const BurgersParams& p, PhaseSolveInfo* info) {
    const Field s1 = shift_op(v, 1);
    const Field s2 = shift_op(v, 2);
    const Field lv = burgers_op(v, p);

    Eigen::Matrix2d A;
    A(0, 0) = inner_product(s1, s1);
    A(0, 1) = inner_product(s1, s2);
    A(1, 0) = A(0, 1);
    A(1, 1) = inner_product(s2, s2);

    Eigen::Vector2d c;
    c[0] = -inner_product(lv, s1);
    c[1] = -inner_product(lv, s2);

    return solve_phase_system(A, c, info);
}

FrozenStepResult frozen_step(const Field& v, const BurgersParams& p, double dt,
                             PhaseSolveInfo* info) {
    if (!(dt > 0.0))
        throw std::invalid_argument("frozen_step: dt must be positive");
    const LieAlgebraVec alg = phase_condition_solve(v, p, info);
    Field next(v.grid, v.values - dt * frozen_op(v, p, alg).values);
    if (!next.values.allFinite())
        throw SolverAbort("frozen_step: non-finite state after update");
    return {std::move(next), alg};
}

std::vector<GroupVec> reconstruct_group(const std::vector<LieAlgebraVec>& algs, double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("reconstruct_group: dt must be positive");
    std::vector<GroupVec> gs;
    gs.reserve(algs.size() + 1);
    GroupVec g{0.0, 0.0};
    gs.push_back(g);
    for (const auto& a : algs) {
        g = g + GroupVec{dt * a.x, dt * a.y};
        gs.push_back(g);
    }
    return gs;
}

FrozenTrajectory solve_frozen(const BurgersParams& p, const Field& u0, double T, int K,
                              const FrozenOptions& opts) {
    if (K < 1)
        throw std::invalid_argument("solve_frozen: need K >= 1");
    const double dt = T / K;
    if (!(dt > 0.0))
        throw std::invalid_argument("solve_frozen: need T > 0");

    FrozenTrajectory traj;
    traj.dt = dt;
    traj.mu = p.mu;
    traj.vs.reserve(K + 1);
    traj.algs.reserve(K);
    traj.phase_log.reserve(K);
    traj.vs.push_back(u0);

    const double cap = opts.blowup_factor * std::max(u0.values.cwiseAbs().maxCoeff(), 1e-300);
    for (int k = 0; k < K; ++k) {
        const Field& v = traj.vs.back();
        PhaseSolveInfo pinfo;
        LieAlgebraVec alg{0.0, 0.0};
        if (!opts.force_zero_phase)
            alg = phase_condition_solve(v, p, &pinfo);
        else
            pinfo.alg = alg;

        if (opts.warn_cfl && dt > max_stable_dt(v, p, alg)) {
            if (traj.cfl_violations == 0)
                std::cerr << "solve_frozen: CFL bound violated at step " << k
                          << " (dt = " << dt << ", bound = " << max_stable_dt(v, p, alg) << ")\n";
            ++traj.cfl_violations;
        }

        Field next(v.grid, v.values - dt * frozen_op(v, p, alg).values);
        if (!next.values.allFinite())
            throw SolverAbort("solve_frozen: non-finite state at step " + std::to_string(k) +
                              " (mu = " + std::to_string(p.mu) + ")");
        if (next.values.cwiseAbs().maxCoeff() > cap)
            throw SolverAbort("solve_frozen: blow-up at step " + std::to_string(k) +
                              " (mu = " + std::to_string(p.mu) +
                              ", |v|_inf = " + std::to_string(next.values.cwiseAbs().maxCoeff()) + ")");
        traj.vs.push_back(std::move(next));
        traj.algs.push_back(alg);
        traj.phase_log.push_back(pinfo);
    }
    traj.gs = reconstruct_group(traj.algs, dt);
    return traj;
}

std::vector<Field> solve_unfrozen(const BurgersParams& p, const Field& u0, double T, int K,
                                  const FrozenOptions& opts) {
    if (K < 1)
        throw std::invalid_argument("solve_unfrozen: need K >= 1");
    const double dt = T / K;
    if (!(dt > 0.0))
        throw std::invalid_argument("solve_unfrozen: need T > 0");

    std::vector<Field> us;
    us.reserve(K + 1);
    us.push_back(u0);
    const double cap = opts.blowup_factor * std::max(u0.values.cwiseAbs().maxCoeff(), 1e-300);
    int cfl_violations = 0;
    for (int k = 0; k < K; ++k) {
        const Field& u = us.back();
        if (opts.warn_cfl && dt > max_stable_dt(u, p, {0.0, 0.0})) {
            if (cfl_violations == 0)
                std::cerr << "solve_unfrozen: CFL bound violated at step " << k << "\n";
            ++cfl_violations;
        }
        Field next(u.grid, u.values - dt * burgers_op(u, p).values);
        if (!next.values.allFinite())
            throw SolverAbort("solve_unfrozen: non-finite state at step " + std::to_string(k) +
                              " (mu = " + std::to_string(p.mu) + ")");
        if (next.values.cwiseAbs().maxCoeff() > cap)
            throw SolverAbort("solve_unfrozen: blow-up at step " + std::to_string(k) +
                              " (mu = " + std::to_string(p.mu) + ")");
        us.push_back(std::move(next));
    }
    return us;
}

std::vector<Field> reconstruct_solution(const FrozenTrajectory& traj) {
    std::vector<Field> us;
    us.reserve(traj.vs.size());
    for (std::size_t k = 0; k < traj.vs.size(); ++k)
        us.push_back(shift_field(traj.vs[k], traj.gs[k]));
    return us;
}

void save_trajectory(const FrozenTrajectory& traj, const std::string& dir, int stride) {
    if (stride < 1)
        throw std::invalid_argument("save_trajectory: stride must be >= 1");
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const int K = static_cast<int>(traj.vs.size()) - 1;
    char name[32];
    for (int k = 0; k <= K; ++k) {
        if (k % stride != 0 && k != K)
            continue;
        std::snprintf(name, sizeof(name), "v_%05d.field", k);
        save_field(traj.vs[k], (fs::path(dir) / name).string());
    }
    std::ofstream os(fs::path(dir) / "trajectory.txt");
    if (!os)
        throw std::runtime_error("save_trajectory: cannot write manifest in " + dir);
    os << "frozenrb-trajectory v1\n";
    char buf[128];
    std::snprintf(buf, sizeof(buf), "mu %.17g\ndt %.17g\nsteps %d\n", traj.mu, traj.dt, K);
    os << buf;
    for (int k = 0; k < K; ++k) {
        std::snprintf(buf, sizeof(buf), "alg %d %.17g %.17g\n", k, traj.algs[k].x, traj.algs[k].y);
        os << buf;
    }
    for (int k = 0; k <= K; ++k) {
        std::snprintf(buf, sizeof(buf), "g %d %.17g %.17g\n", k, traj.gs[k].x, traj.gs[k].y);
        os << buf;
    }
}

}  // namespace frozenrb
