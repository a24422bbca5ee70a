#include "frozenrb/reduction.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace frozenrb {

ReducedBasis truncate(const ReducedBasis& rb, int n) {
    if (n < 0 || n > rb.size())
        throw std::invalid_argument("truncate(ReducedBasis): size out of range");
    ReducedBasis out;
    out.psi.assign(rb.psi.begin(), rb.psi.begin() + n);
    return out;
}

static void check_training_mus(const std::vector<double>& mus) {
    if (mus.empty())
        throw std::invalid_argument("collect_snapshots: empty training set");
    std::vector<double> sorted(mus);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("collect_snapshots: training parameters must be distinct");
}

SnapshotSet collect_snapshots(const std::vector<double>& training_mus, double T, int K,
                              const Field& u0) {
    check_training_mus(training_mus);
    SnapshotSet set;
    set.grid = u0.grid;
    set.mus = training_mus;
    for (double mu : training_mus) {
        const BurgersParams p(mu);
        FrozenTrajectory traj = solve_frozen(p, u0, T, K);
        // alg at k = K is not part of the stepping; solve it once for the
        // final operator snapshot pair
        const LieAlgebraVec alg_final = phase_condition_solve(traj.vs.back(), p);
        for (int k = 0; k <= K; ++k) {
            const Field& v = traj.vs[k];
            const LieAlgebraVec alg = (k < K) ? traj.algs[k] : alg_final;
            set.states.push_back({v, mu, k});
            set.ops.push_back({burgers_op(v, p), mu, k, OpFamily::plain});
            set.ops.push_back({frozen_op(v, p, alg), mu, k, OpFamily::frozen});
        }
    }
    return set;
}

SnapshotSet collect_unfrozen_snapshots(const std::vector<double>& training_mus, double T, int K,
                                       const Field& u0) {
    check_training_mus(training_mus);
    SnapshotSet set;
    set.grid = u0.grid;
    set.mus = training_mus;
    for (double mu : training_mus) {
        const BurgersParams p(mu);
        std::vector<Field> us = solve_unfrozen(p, u0, T, K);
        for (int k = 0; k <= K; ++k) {
            set.states.push_back({us[k], mu, k});
            set.ops.push_back({burgers_op(us[k], p), mu, k, OpFamily::plain});
        }
    }
    return set;
}

namespace {

void fix_sign(Eigen::VectorXd& v) {
    const double cap = 1e-12 * v.cwiseAbs().maxCoeff();
    for (long i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > cap) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

}  // namespace

std::vector<Field> pod(const std::vector<Field>& snapshots, int n) {
    std::vector<Field> modes;
    if (snapshots.empty() || n <= 0)
        return modes;
    const int S = static_cast<int>(snapshots.size());
    if (n > S)
        throw std::invalid_argument("pod: requested more modes than snapshots");

    Eigen::MatrixXd gram(S, S);
    for (int i = 0; i < S; ++i)
        for (int j = i; j < S; ++j)
            gram(i, j) = gram(j, i) = inner_product(snapshots[i], snapshots[j]);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);  // ascending eigenvalues
    const double lmax = es.eigenvalues()[S - 1];
    if (!(lmax > 0.0))
        return modes;  // all-zero snapshot set
    const double cutoff = lmax * 1e-13;

    for (int j = S - 1; j >= 0 && static_cast<int>(modes.size()) < n; --j) {
        if (es.eigenvalues()[j] <= cutoff)
            break;
        Eigen::VectorXd vals = Eigen::VectorXd::Zero(snapshots[0].size());
        for (int i = 0; i < S; ++i)
            vals += es.eigenvectors()(i, j) * snapshots[i].values;
        Field mode(snapshots[0].grid, std::move(vals));
        const double nrm = l2_norm(mode);
        if (!(nrm > 0.0))
            break;
        mode.values /= nrm;
        fix_sign(mode.values);
        modes.push_back(std::move(mode));
    }
    return modes;
}

PodGreedyResult pod_greedy(const SnapshotSet& snaps, int n_max, double tol) {
    if (n_max < 1)
        throw std::invalid_argument("pod_greedy: need n_max >= 1");
    if (snaps.states.empty())
        throw std::invalid_argument("pod_greedy: empty snapshot set");

    // group states by training parameter, preserving the mu order
    std::vector<std::vector<const Field*>> trajs(snaps.mus.size());
    for (const auto& s : snaps.states) {
        auto it = std::find(snaps.mus.begin(), snaps.mus.end(), s.mu);
        if (it == snaps.mus.end())
            throw std::invalid_argument("pod_greedy: snapshot with unknown mu");
        trajs[it - snaps.mus.begin()].push_back(&s.field);
    }

    // squared projection-error residuals, updated incrementally per new mode
    std::vector<std::vector<double>> res2(trajs.size());
    for (std::size_t t = 0; t < trajs.size(); ++t) {
        res2[t].reserve(trajs[t].size());
        for (const Field* f : trajs[t])
            res2[t].push_back(inner_product(*f, *f));
    }

    PodGreedyResult result;
    while (true) {
        // pick the worst trajectory by the cheap incremental residuals
        double sel_err = -1.0;
        std::size_t worst_t = 0;
        for (std::size_t t = 0; t < trajs.size(); ++t) {
            double m = 0.0;
            for (double r : res2[t])
                m = std::max(m, std::sqrt(std::max(r, 0.0)));
            if (m > sel_err) {
                sel_err = m;
                worst_t = t;
            }
        }

        // assemble its projection-error fields; their norms give the exact
        // error (the incremental values cancel to sqrt(eps) near zero)
        std::vector<Field> errors;
        errors.reserve(trajs[worst_t].size());
        double worst_err = 0.0;
        for (const Field* f : trajs[worst_t]) {
            Field e = *f;
            for (const Field& psi : result.basis.psi)
                e.values -= inner_product(*f, psi) * psi.values;
            worst_err = std::max(worst_err, l2_norm(e));
            errors.push_back(std::move(e));
        }
        result.log.push_back({result.basis.size(), worst_err, snaps.mus[worst_t]});

        const std::size_t L = result.log.size();
        if (L >= 4 && result.log[L - 1].worst_error >= result.log[L - 4].worst_error * (1.0 - 1e-12))
            result.stagnated = true;

        if (worst_err <= tol || result.basis.size() >= n_max)
            break;

        std::vector<Field> mode = pod(errors, 1);
        if (mode.empty())
            break;  // trajectory fully captured, nothing to add

        // orthogonalize the new mode against the basis (twice, for stability)
        Field w = std::move(mode[0]);
        for (int pass = 0; pass < 2; ++pass)
            for (const Field& psi : result.basis.psi)
                w.values -= inner_product(w, psi) * psi.values;
        const double nrm = l2_norm(w);
        if (nrm < 1e-8)
            break;  // numerically inside the current span
        w.values /= nrm;
        fix_sign(w.values);

        for (std::size_t t = 0; t < trajs.size(); ++t)
            for (std::size_t k = 0; k < trajs[t].size(); ++k) {
                const double c = inner_product(*trajs[t][k], w);
                res2[t][k] -= c * c;
            }
        result.basis.psi.push_back(std::move(w));
    }
    return result;
}

std::vector<int> restricted_dofs(const std::vector<int>& q, const GridSpec& grid) {
    std::set<int> dofs;
    for (int m : q)
        for (int d : stencil_of(m, grid))
            dofs.insert(d);
    return std::vector<int>(dofs.begin(), dofs.end());
}

EIData ei_greedy(const std::vector<Field>& op_snaps, int m_max, double tol) {
    if (op_snaps.empty())
        throw std::invalid_argument("ei_greedy: empty snapshot list");
    if (m_max < 1)
        throw std::invalid_argument("ei_greedy: need m_max >= 1");
    const GridSpec grid = op_snaps[0].grid;
    const long H = op_snaps[0].values.size();
    const int S = static_cast<int>(op_snaps.size());
    for (const Field& f : op_snaps)
        if (!(f.grid == grid))
            throw std::invalid_argument("ei_greedy: snapshots on different grids");

    // residual columns, updated in place after each selection
    Eigen::MatrixXd R(H, S);
    double scale = 0.0;
    for (int s = 0; s < S; ++s) {
        R.col(s) = op_snaps[s].values;
        scale = std::max(scale, R.col(s).cwiseAbs().maxCoeff());
    }
    const double stop_eps = std::max(tol, 1e-14 * scale);

    EIData ei;
    ei.grid = grid;
    while (ei.size() < m_max) {
        // worst snapshot in sup norm, lowest index wins ties
        int worst = 0;
        double worst_err = -1.0;
        for (int s = 0; s < S; ++s) {
            const double e = R.col(s).cwiseAbs().maxCoeff();
            if (e > worst_err) {
                worst_err = e;
                worst = s;
            }
        }
        if (worst_err <= stop_eps)
            break;

        long qm = 0;
        double best = -1.0;
        for (long i = 0; i < H; ++i) {
            const double a = std::abs(R(i, worst));
            if (a > best) {
                best = a;
                qm = i;
            }
        }
        Eigen::VectorXd xi = R.col(worst) / R(qm, worst);
        ei.greedy_errors.push_back(worst_err);
        ei.selected_snapshots.push_back(worst);
        ei.q.push_back(static_cast<int>(qm));
        ei.xi.emplace_back(grid, xi);
        for (int s = 0; s < S; ++s) {
            const double c = R(qm, s);
            R.col(s) -= c * xi;
        }
    }

    const int M = ei.size();
    ei.interp_matrix = Eigen::MatrixXd::Zero(M, M);
    for (int m = 0; m < M; ++m)
        for (int j = 0; j < M; ++j)
            ei.interp_matrix(j, m) = ei.xi[m].values[ei.q[j]];
    ei.q_prime = restricted_dofs(ei.q, grid);
    return ei;
}

EIData truncate(const EIData& ei, int m) {
    if (m < 0 || m > ei.size())
        throw std::invalid_argument("truncate(EIData): size out of range");
    EIData out;
    out.grid = ei.grid;
    out.q.assign(ei.q.begin(), ei.q.begin() + m);
    out.xi.assign(ei.xi.begin(), ei.xi.begin() + m);
    out.interp_matrix = ei.interp_matrix.topLeftCorner(m, m);
    out.greedy_errors.assign(ei.greedy_errors.begin(), ei.greedy_errors.begin() + m);
    out.selected_snapshots.assign(ei.selected_snapshots.begin(), ei.selected_snapshots.begin() + m);
    out.q_prime = restricted_dofs(out.q, *ei.grid);
    return out;
}

Eigen::VectorXd ei_coefficients(const EIData& ei, const Field& w) {
    const int M = ei.size();
    Eigen::VectorXd rhs(M);
    for (int m = 0; m < M; ++m)
        rhs[m] = w.values[ei.q[m]];
    return ei.interp_matrix.triangularView<Eigen::Lower>().solve(rhs);
}

Field ei_interpolate(const EIData& ei, const Field& w) {
    const Eigen::VectorXd sigma = ei_coefficients(ei, w);
    Eigen::VectorXd vals = Eigen::VectorXd::Zero(w.values.size());
    for (int m = 0; m < ei.size(); ++m)
        vals += sigma[m] * ei.xi[m].values;
    return Field(w.grid, std::move(vals));
}

Eigen::VectorXd project(const Field& v, const ReducedBasis& rb) {
    Eigen::VectorXd c(rb.size());
    for (int n = 0; n < rb.size(); ++n)
        c[n] = inner_product(v, rb.psi[n]);
    return c;
}

}  // namespace frozenrb
