#include "frozenrb/online.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frozenrb {

OnlineSystem assemble_online(const ReducedBasis& rb, const EIData& ei) {
    if (rb.size() == 0 || ei.size() == 0)
        throw std::invalid_argument("assemble_online: empty basis or interpolation data");
    if (!ei.grid || !(rb.psi[0].grid == *ei.grid))
        throw std::invalid_argument("assemble_online: basis and EI data on different grids");

    OnlineSystem sys;
    sys.grid = rb.psi[0].grid;
    sys.n = rb.size();
    sys.m = ei.size();
    sys.l = static_cast<int>(ei.q_prime.size());
    sys.q = ei.q;
    sys.q_prime = ei.q_prime;
    sys.interp_matrix = ei.interp_matrix;

    sys.P.resize(sys.n, sys.m);
    for (int n = 0; n < sys.n; ++n)
        for (int m = 0; m < sys.m; ++m)
            sys.P(n, m) = inner_product(ei.xi[m], rb.psi[n]);
    // fold the triangular interpolation solve into the stepping matrix:
    // P_step * raw == P * (T^-1 * raw)
    sys.P_step = ei.interp_matrix.transpose()
                     .triangularView<Eigen::Upper>()
                     .solve(sys.P.transpose())
                     .transpose();

    sys.EV.resize(sys.l, sys.n);
    for (int l = 0; l < sys.l; ++l)
        for (int n = 0; n < sys.n; ++n)
            sys.EV(l, n) = rb.psi[n].values[ei.q_prime[l]];

    std::vector<std::array<Field, 2>> spsi;
    spsi.reserve(sys.n);
    for (int n = 0; n < sys.n; ++n)
        spsi.push_back({shift_op(rb.psi[n], 1), shift_op(rb.psi[n], 2)});

    for (int r = 0; r < 2; ++r) {
        for (int s = 0; s < 2; ++s) {
            sys.PCL[r][s].resize(sys.n, sys.n);
            for (int n = 0; n < sys.n; ++n)
                for (int n2 = 0; n2 < sys.n; ++n2)
                    sys.PCL[r][s](n, n2) = inner_product(spsi[n][r], spsi[n2][s]);
        }
        sys.PCR[r].resize(sys.m, sys.n);
        for (int m = 0; m < sys.m; ++m)
            for (int n = 0; n < sys.n; ++n)
                sys.PCR[r](m, n) = inner_product(ei.xi[m], spsi[n][r]);
    }

    // positions of each target's stencil DOFs inside q_prime
    sys.roles.reserve(sys.m);
    auto pos_in_qprime = [&](int dof) {
        auto it = std::lower_bound(sys.q_prime.begin(), sys.q_prime.end(), dof);
        if (it == sys.q_prime.end() || *it != dof)
            throw std::logic_error("assemble_online: stencil DOF missing from q_prime");
        return static_cast<int>(it - sys.q_prime.begin());
    };
    for (int m = 0; m < sys.m; ++m) {
        const StencilRoles r = stencil_roles(ei.q[m], sys.grid);
        sys.roles.push_back({pos_in_qprime(r.c), pos_in_qprime(r.w), pos_in_qprime(r.e),
                             pos_in_qprime(r.s), pos_in_qprime(r.n)});
    }
    return sys;
}

namespace {

// operator values at the q_m targets from the restricted reconstruction y
Eigen::VectorXd restricted_op_values(const OnlineSystem& sys, const BurgersParams& p,
                                     const LieAlgebraVec& g, const Eigen::VectorXd& y,
                                     OpCounter* counter) {
    Eigen::VectorXd raw(sys.m);
    for (int m = 0; m < sys.m; ++m) {
        const StencilRoles& r = sys.roles[m];
        raw[m] = eval_cell(p, g, y[r.c], y[r.w], y[r.e], y[r.s], y[r.n],
                           sys.grid.dx, sys.grid.dy);
    }
    if (counter)
        counter->flops += static_cast<std::uint64_t>(sys.m) * 40;  // 4 edge fluxes per target
    return raw;
}

Eigen::VectorXd interp_coeffs(const OnlineSystem& sys, const Eigen::VectorXd& raw,
                              OpCounter* counter) {
    if (counter)
        counter->flops += static_cast<std::uint64_t>(sys.m) * (sys.m + 1) / 2;
    return sys.interp_matrix.triangularView<Eigen::Lower>().solve(raw);
}

Eigen::VectorXd restricted_reconstruction(const OnlineSystem& sys, const Eigen::VectorXd& c,
                                          OpCounter* counter) {
    if (counter)
        counter->flops += static_cast<std::uint64_t>(sys.l) * sys.n;
    return sys.EV * c;
}

LieAlgebraVec phase_from_values(const OnlineSystem& sys, const Eigen::VectorXd& c,
                                const Eigen::VectorXd& sigma_plain, PhaseSolveInfo* info,
                                OpCounter* counter) {
    Eigen::Matrix2d A;
    Eigen::Vector2d rhs;
    for (int r = 0; r < 2; ++r) {
        for (int s = r; s < 2; ++s) {
            A(r, s) = c.dot(sys.PCL[r][s] * c);
            A(s, r) = A(r, s);
        }
        rhs[r] = -sigma_plain.dot(sys.PCR[r] * c);
    }
    if (counter)
        counter->flops += 3ull * sys.n * (sys.n + 1) +
                          2ull * sys.m * (sys.n + 1);
    return solve_phase_system(A, rhs, info);
}

}  // namespace

LieAlgebraVec reduced_phase_solve(const ReducedState& s, const OnlineSystem& sys,
                                  const BurgersParams& p, PhaseSolveInfo* info,
                                  OpCounter* counter) {
    const Eigen::VectorXd y = restricted_reconstruction(sys, s.c, counter);
    const Eigen::VectorXd raw = restricted_op_values(sys, p, {0.0, 0.0}, y, counter);
    const Eigen::VectorXd sigma = interp_coeffs(sys, raw, counter);
    return phase_from_values(sys, s.c, sigma, info, counter);
}

namespace {

ReducedState step_impl(const ReducedState& s, const OnlineSystem& sys, const BurgersParams& p,
                       double dt, bool freeze, PhaseSolveInfo* info, OpCounter* counter) {
    if (!(dt > 0.0))
        throw std::invalid_argument("reduced_step: dt must be positive");
    const Eigen::VectorXd y = restricted_reconstruction(sys, s.c, counter);

    LieAlgebraVec alg{0.0, 0.0};
    if (freeze) {
        const Eigen::VectorXd raw_plain = restricted_op_values(sys, p, {0.0, 0.0}, y, counter);
        const Eigen::VectorXd sigma_plain = interp_coeffs(sys, raw_plain, counter);
        alg = phase_from_values(sys, s.c, sigma_plain, info, counter);
    }

    const Eigen::VectorXd raw = restricted_op_values(sys, p, alg, y, counter);
    ReducedState next;
    next.c = s.c - dt * (sys.P_step * raw);
    next.alg = alg;
    if (counter)
        counter->flops += static_cast<std::uint64_t>(sys.n) * (sys.m + 1);
    if (!next.c.allFinite())
        throw SolverAbort("reduced step: non-finite coefficients");
    return next;
}

ReducedTrajectory solve_impl(const BurgersParams& p, const OnlineSystem& sys,
                             const ReducedBasis& rb, const Field& u0, double T, int K,
                             bool freeze, OpCounter* counter) {
    if (K < 1)
        throw std::invalid_argument("solve_reduced: need K >= 1");
    const double dt = T / K;
    if (!(dt > 0.0))
        throw std::invalid_argument("solve_reduced: need T > 0");
    if (rb.size() != sys.n)
        throw std::invalid_argument("solve_reduced: basis size does not match online system");

    ReducedTrajectory traj;
    traj.states.reserve(K + 1);
    ReducedState s;
    s.c = project(u0, rb);
    s.alg = {0.0, 0.0};
    traj.states.push_back(s);

    const double cap = 1e3 * std::max(s.c.norm(), 1.0);
    std::vector<LieAlgebraVec> algs;
    algs.reserve(K);
    for (int k = 0; k < K; ++k) {
        PhaseSolveInfo pinfo;
        ReducedState next;
        try {
            next = step_impl(traj.states.back(), sys, p, dt, freeze, &pinfo, counter);
        } catch (const SolverAbort& e) {
            throw SolverAbort(std::string(e.what()) + " at step " + std::to_string(k) +
                              " (mu = " + std::to_string(p.mu) + ")");
        }
        if (next.c.norm() > cap)
            throw SolverAbort("solve_reduced: blow-up at step " + std::to_string(k) +
                              " (mu = " + std::to_string(p.mu) + ")");
        algs.push_back(next.alg);
        traj.phase_log.push_back(pinfo);
        traj.states.push_back(std::move(next));
    }
    traj.gs = reconstruct_group(algs, dt);
    return traj;
}

}  // namespace

ReducedState reduced_step(const ReducedState& s, const OnlineSystem& sys, const BurgersParams& p,
                          double dt, OpCounter* counter) {
    return step_impl(s, sys, p, dt, true, nullptr, counter);
}

ReducedState reduced_step_unfrozen(const ReducedState& s, const OnlineSystem& sys,
                                   const BurgersParams& p, double dt, OpCounter* counter) {
    return step_impl(s, sys, p, dt, false, nullptr, counter);
}

ReducedTrajectory solve_reduced(const BurgersParams& p, const OnlineSystem& sys,
                                const ReducedBasis& rb, const Field& u0, double T, int K,
                                OpCounter* counter) {
    return solve_impl(p, sys, rb, u0, T, K, true, counter);
}

ReducedTrajectory solve_reduced_unfrozen(const BurgersParams& p, const OnlineSystem& sys,
                                         const ReducedBasis& rb, const Field& u0, double T, int K,
                                         OpCounter* counter) {
    return solve_impl(p, sys, rb, u0, T, K, false, counter);
}

Field lift(const Eigen::VectorXd& c, const ReducedBasis& rb) {
    if (rb.size() == 0)
        throw std::invalid_argument("lift: empty basis");
    if (c.size() != rb.size())
        throw std::invalid_argument("lift: coefficient count does not match basis size");
    Eigen::VectorXd vals = Eigen::VectorXd::Zero(rb.psi[0].size());
    for (int n = 0; n < rb.size(); ++n)
        vals += c[n] * rb.psi[n].values;
    return Field(rb.psi[0].grid, std::move(vals));
}

Field lift(const ReducedState& s, const ReducedBasis& rb) {
    return lift(s.c, rb);
}

}  // namespace frozenrb
