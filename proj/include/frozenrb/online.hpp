#pragma once

#include "frozenrb/freezing.hpp"
#include "frozenrb/reduction.hpp"

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

namespace frozenrb {

/// Counts scalar multiply-add work performed by the online stepping; the
/// totals depend only on (N, M, L), never on the grid size H.
struct OpCounter {
    std::uint64_t flops = 0;
};

struct ReducedState {
    Eigen::VectorXd c;  // coefficients in the reduced basis
    LieAlgebraVec alg;  // phase solution used to reach this state (0 at k = 0)
};

/// Precomputed matrices for H-independent online stepping.
///
///   P(n,m)       = (xi_m, psi_n)
///   EV(l,n)      = psi_n[q'_l]
///   PCL[r][s]    = (S_r psi_n, S_s psi_n')   (N x N)
///   PCR[r](m,n)  = (xi_m, S_r psi_n)         (M x N)
///
/// Online evaluation expands the operator in the collateral basis with
/// interpolation coefficients sigma = T^-1 * (operator values at the q_m),
/// where T is the nested triangular EIM matrix. The step matrix
/// P_step = P * T^-1 is folded in once, offline.
struct OnlineSystem {
    GridSpec grid;
    int n = 0, m = 0, l = 0;
    Eigen::MatrixXd P;
    Eigen::MatrixXd P_step;
    Eigen::MatrixXd EV;
    std::array<std::array<Eigen::MatrixXd, 2>, 2> PCL;
    std::array<Eigen::MatrixXd, 2> PCR;
    std::vector<int> q;
    std::vector<int> q_prime;
    Eigen::MatrixXd interp_matrix;
    std::vector<StencilRoles> roles;  // stencil positions within q_prime, per target

    OnlineSystem() : grid(2, 2, 1.0, 1.0) {}
};

/// Assemble all online matrices by full-dimensional operator applications.
OnlineSystem assemble_online(const ReducedBasis& rb, const EIData& ei);

/// Reduced orthogonality phase condition:
/// [c^T PCL^{r,s} c] alg = -[sigma^T PCR^r c] with sigma the interpolation
/// coefficients of the plain operator at the restricted reconstruction.
/// Same degenerate policy as the detailed solver. Cost O(N^2 + M(C+N)).
LieAlgebraVec reduced_phase_solve(const ReducedState& s, const OnlineSystem& sys,
                                  const BurgersParams& p, PhaseSolveInfo* info = nullptr,
                                  OpCounter* counter = nullptr);

/// One step of the reduced frozen scheme (phase solve, then coefficient
/// update with the interpolated frozen operator).
ReducedState reduced_step(const ReducedState& s, const OnlineSystem& sys, const BurgersParams& p,
                          double dt, OpCounter* counter = nullptr);

/// Baseline step without freezing: alg = 0, plain operator only.
ReducedState reduced_step_unfrozen(const ReducedState& s, const OnlineSystem& sys,
                                   const BurgersParams& p, double dt,
                                   OpCounter* counter = nullptr);

struct ReducedTrajectory {
    std::vector<ReducedState> states;  // K+1 entries
    std::vector<GroupVec> gs;          // K+1 entries
    std::vector<PhaseSolveInfo> phase_log;
};

ReducedTrajectory solve_reduced(const BurgersParams& p, const OnlineSystem& sys,
                                const ReducedBasis& rb, const Field& u0, double T, int K,
                                OpCounter* counter = nullptr);

ReducedTrajectory solve_reduced_unfrozen(const BurgersParams& p, const OnlineSystem& sys,
                                         const ReducedBasis& rb, const Field& u0, double T, int K,
                                         OpCounter* counter = nullptr);

/// Expansion sum_n c_n psi_n.
Field lift(const ReducedState& s, const ReducedBasis& rb);
Field lift(const Eigen::VectorXd& c, const ReducedBasis& rb);

}  // namespace frozenrb
