#pragma once

#include "frozenrb/grid.hpp"
#include "frozenrb/operators.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace frozenrb {

/// Diagnostics of one 2x2 phase-condition solve.
struct PhaseSolveInfo {
    LieAlgebraVec alg;
    bool degenerate = false;  // near-singular Gram, minimum-norm LSQ path taken
    double cond = 0.0;        // spectral condition number of the Gram matrix
    Eigen::Matrix2d gram = Eigen::Matrix2d::Zero();
    Eigen::Vector2d rhs = Eigen::Vector2d::Zero();
};

/// Solve A*alg = rhs for a symmetric PSD 2x2 Gram matrix. Near-singular
/// systems (det(A) < 1e-12*trace(A)^2/4, or A = 0) fall back to the
/// minimum-norm least-squares solution. This policy is shared by the
/// detailed and the reduced solver.
LieAlgebraVec solve_phase_system(const Eigen::Matrix2d& A, const Eigen::Vector2d& rhs,
                                 PhaseSolveInfo* info = nullptr);

/// Orthogonality phase condition: assemble the Gram matrix
/// A_rs = (S_r v, S_s v) and rhs c_r = -(L_mu(v), S_r v), return alg with
/// A*alg = c.
LieAlgebraVec phase_condition_solve(const Field& v, const BurgersParams& p,
                                    PhaseSolveInfo* info = nullptr);

/// One explicit Euler step of the frozen scheme:
/// alg = phase_condition_solve(v), v_next = v - dt*frozen_op(v, p, alg).
struct FrozenStepResult {
    Field v_next;
    LieAlgebraVec alg;
};
FrozenStepResult frozen_step(const Field& v, const BurgersParams& p, double dt,
                             PhaseSolveInfo* info = nullptr);

/// Integrate the reconstruction equation g' = alg with explicit Euler from
/// g(0) = (0,0). For G = R^2 the group exponential is the identity, so the
/// update is plain vector addition. Returns K+1 entries for K inputs.
std::vector<GroupVec> reconstruct_group(const std::vector<LieAlgebraVec>& algs, double dt);

struct FrozenTrajectory {
    std::vector<Field> vs;            // K+1 shape states
    std::vector<LieAlgebraVec> algs;  // K per-step Lie algebra solutions
    std::vector<GroupVec> gs;         // K+1 group states, gs[0] = (0,0)
    std::vector<PhaseSolveInfo> phase_log;
    double dt = 0.0;
    double mu = 0.0;
    int cfl_violations = 0;
};

struct FrozenOptions {
    bool force_zero_phase = false;   // testing hook: alg == 0 every step
    double blowup_factor = 1e3;      // abort if |v|_inf exceeds this times the initial value
    bool warn_cfl = true;
};

/// Raised on NaN or blow-up with the failing step in the message.
struct SolverAbort : std::runtime_error {
    using std::runtime_error::runtime_error;
};

FrozenTrajectory solve_frozen(const BurgersParams& p, const Field& u0, double T, int K,
                              const FrozenOptions& opts = {});

/// Baseline: explicit Euler with the plain operator only.
std::vector<Field> solve_unfrozen(const BurgersParams& p, const Field& u0, double T, int K,
                                  const FrozenOptions& opts = {});

/// u^k = g^k . v^k
std::vector<Field> reconstruct_solution(const FrozenTrajectory& traj);

/// Persist a trajectory: field dumps every `stride` steps (k = 0 and k = K
/// always included) plus a plain-text manifest with K, dt, mu and the
/// alg/g sequences.
void save_trajectory(const FrozenTrajectory& traj, const std::string& dir, int stride = 1);

}  // namespace frozenrb
