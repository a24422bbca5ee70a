#pragma once

#include "frozenrb/freezing.hpp"
#include "frozenrb/grid.hpp"
#include "frozenrb/operators.hpp"

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace frozenrb {

/// L2-orthonormal reduced basis. Nested: the first n entries of a basis of
/// size N are exactly the stage-n basis produced by the greedy.
struct ReducedBasis {
    std::vector<Field> psi;
    int size() const { return static_cast<int>(psi.size()); }
};

ReducedBasis truncate(const ReducedBasis& rb, int n);

enum class OpFamily { plain, frozen };

struct StateSnapshot {
    Field field;
    double mu;
    int k;
};

struct OperatorSnapshot {
    Field field;
    double mu;
    int k;
    OpFamily family;
};

struct SnapshotSet {
    std::optional<GridSpec> grid;
    std::vector<double> mus;
    std::vector<StateSnapshot> states;
    std::vector<OperatorSnapshot> ops;
};

/// Run solve_frozen for each training parameter and record the shape states
/// v^k together with both operator families L_mu(v^k) and L^G_{mu,alg^k}(v^k)
/// for k = 0..K (the final alg comes from an extra phase solve at v^K).
/// Training parameters must be distinct.
SnapshotSet collect_snapshots(const std::vector<double>& training_mus, double T, int K,
                              const Field& u0);

/// Baseline data: unfrozen states u^k plus plain-operator snapshots.
SnapshotSet collect_unfrozen_snapshots(const std::vector<double>& training_mus, double T, int K,
                                       const Field& u0);

/// Method of snapshots: the n dominant L2-orthonormal modes from the
/// eigendecomposition of the snapshot Gram matrix. Deterministic sign
/// convention: first significantly nonzero DOF of each mode is positive.
std::vector<Field> pod(const std::vector<Field>& snapshots, int n);

struct GreedyLogEntry {
    int n;               // basis size when the error was measured
    double worst_error;  // max over k of the L2 projection error, max over mu
    double worst_mu;
};

struct PodGreedyResult {
    ReducedBasis basis;
    std::vector<GreedyLogEntry> log;
    bool stagnated = false;
};

/// POD-Greedy over trajectories grouped by parameter: pick the worst
/// trajectory, extend the basis by the first POD mode of its projection
/// error sequence, re-orthonormalize, repeat until n_max or tol.
PodGreedyResult pod_greedy(const SnapshotSet& snaps, int n_max, double tol);

/// Empirical operator interpolation data (nested/prefix by construction).
struct EIData {
    std::vector<int> q;                  // interpolation DOF indices, pairwise distinct
    std::vector<Field> xi;               // collateral basis, xi_m[q_m] = 1, xi_m[q_j] = 0 for j < m
    Eigen::MatrixXd interp_matrix;       // T(j,m) = xi_m[q_j], unit lower-triangular
    std::vector<int> q_prime;            // sorted union of the q-stencils
    std::optional<GridSpec> grid;
    std::vector<double> greedy_errors;   // sup-norm error before each selection
    std::vector<int> selected_snapshots; // which input snapshot supplied each xi
    int size() const { return static_cast<int>(q.size()); }
};

/// Classical EIM greedy over the snapshot list (sup-norm over DOFs, lowest
/// index wins ties). Stops early when the worst residual falls below
/// max(tol, 1e-14 * snapshot scale).
EIData ei_greedy(const std::vector<Field>& op_snaps, int m_max, double tol);

/// Prefix truncation; recomputes the restricted DOF set.
EIData truncate(const EIData& ei, int m);

/// Sorted deduplicated union of stencil_of(q_m); size <= 5*|q|.
std::vector<int> restricted_dofs(const std::vector<int>& q, const GridSpec& grid);

/// Interpolation coefficients sigma with T*sigma = w[q] (forward substitution).
Eigen::VectorXd ei_coefficients(const EIData& ei, const Field& w);

/// The empirical interpolant sum_m sigma_m xi_m of w.
Field ei_interpolate(const EIData& ei, const Field& w);

/// L2-orthogonal projection coefficients c_n = (v, psi_n).
Eigen::VectorXd project(const Field& v, const ReducedBasis& rb);

}  // namespace frozenrb
