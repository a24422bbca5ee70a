// Independent reference implementations used as test oracles. These are
// deliberately written with a different structure than the library code
// (edge-array assembly, dense solves, full-space expansion) so that they can
// catch indexing, wrap and assembly mistakes in the fast paths.
#pragma once

#include "frozenrb/freezing.hpp"
#include "frozenrb/online.hpp"
#include "frozenrb/reduction.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace frozenrb::testing {

inline double oracle_combined_flux(double u, double b, double g, double mu) {
    const double up = (mu == 1.0) ? u : std::pow(std::max(u, 0.0), mu);
    return b * up - g * u;
}

// Flux-divergence oracle: assembles one array of west-face and one of
// south-face fluxes, then differences them.
inline Eigen::VectorXd brute_force_divergence(const Field& v, const BurgersParams& p,
                                              const LieAlgebraVec& g) {
    const GridSpec& G = v.grid;
    const double a = 1.0 / p.lxf_lambda;
    std::vector<double> fw(G.size()), fs(G.size());
    for (int j = 0; j < G.ny; ++j)
        for (int i = 0; i < G.nx; ++i) {
            const double uC = v.at(i, j);
            const double uW = v.at(i - 1, j);
            const double uS = v.at(i, j - 1);
            fw[j * G.nx + i] = 0.5 * (oracle_combined_flux(uW, p.bx, g.x, p.mu) +
                                      oracle_combined_flux(uC, p.bx, g.x, p.mu)) -
                               0.5 * a * (uC - uW);
            fs[j * G.nx + i] = 0.5 * (oracle_combined_flux(uS, p.by, g.y, p.mu) +
                                      oracle_combined_flux(uC, p.by, g.y, p.mu)) -
                               0.5 * a * (uC - uS);
        }
    Eigen::VectorXd out(G.size());
    for (int j = 0; j < G.ny; ++j)
        for (int i = 0; i < G.nx; ++i) {
            const int ie = G.index(i + 1, j);
            const int jn = G.index(i, j + 1);
            out[j * G.nx + i] = (fw[ie] - fw[j * G.nx + i]) / G.dx +
                                (fs[jn] - fs[j * G.nx + i]) / G.dy;
        }
    return out;
}

// Phase-condition oracle: independent Gram assembly with plain loops and a
// dense least-squares solve.
inline Eigen::Vector2d dense_phase_oracle(const Field& v, const BurgersParams& p) {
    const GridSpec& G = v.grid;
    Eigen::VectorXd s1(G.size()), s2(G.size());
    for (int j = 0; j < G.ny; ++j)
        for (int i = 0; i < G.nx; ++i) {
            s1[j * G.nx + i] = -(v.at(i + 1, j) - v.at(i - 1, j)) / (2.0 * G.dx);
            s2[j * G.nx + i] = -(v.at(i, j + 1) - v.at(i, j - 1)) / (2.0 * G.dy);
        }
    const Eigen::VectorXd lv = brute_force_divergence(v, p, {0.0, 0.0});
    const double w = G.dx * G.dy;
    Eigen::Matrix2d A;
    A << w * s1.dot(s1), w * s1.dot(s2), w * s2.dot(s1), w * s2.dot(s2);
    Eigen::Vector2d c(-w * lv.dot(s1), -w * lv.dot(s2));
    return A.fullPivHouseholderQr().solve(c);
}

struct DirectStepResult {
    Eigen::VectorXd c_next;
    LieAlgebraVec alg;
};

// Reduced step assembled entirely in V_H: lift, full operator applications,
// interpolation via a dense solve of the triangular system, projection.
inline DirectStepResult direct_reduced_step(const Eigen::VectorXd& c, const ReducedBasis& rb,
                                            const EIData& ei, const BurgersParams& p, double dt,
                                            bool freeze = true) {
    const Field vN = lift(c, rb);
    LieAlgebraVec alg{0.0, 0.0};
    if (freeze) {
        const Field s1 = shift_op(vN, 1);
        const Field s2 = shift_op(vN, 2);
        Eigen::Matrix2d A;
        A(0, 0) = inner_product(s1, s1);
        A(0, 1) = A(1, 0) = inner_product(s1, s2);
        A(1, 1) = inner_product(s2, s2);
        const Field w = burgers_op(vN, p);
        Eigen::VectorXd wq(ei.size());
        for (int m = 0; m < ei.size(); ++m)
            wq[m] = w.values[ei.q[m]];
        const Eigen::VectorXd sigma = ei.interp_matrix.fullPivLu().solve(wq);
        Field interp(vN.grid);
        for (int m = 0; m < ei.size(); ++m)
            interp.values += sigma[m] * ei.xi[m].values;
        Eigen::Vector2d rhs(-inner_product(interp, s1), -inner_product(interp, s2));
        alg = solve_phase_system(A, rhs);
    }
    const Field w = frozen_op(vN, p, alg);
    Eigen::VectorXd wq(ei.size());
    for (int m = 0; m < ei.size(); ++m)
        wq[m] = w.values[ei.q[m]];
    const Eigen::VectorXd sigma = ei.interp_matrix.fullPivLu().solve(wq);
    Field interp(vN.grid);
    for (int m = 0; m < ei.size(); ++m)
        interp.values += sigma[m] * ei.xi[m].values;
    DirectStepResult out;
    out.c_next.resize(rb.size());
    for (int n = 0; n < rb.size(); ++n)
        out.c_next[n] = c[n] - dt * inner_product(interp, rb.psi[n]);
    out.alg = alg;
    return out;
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Field random_field(const GridSpec& grid, std::mt19937_64& rng, double lo = 0.0,
                          double hi = 1.0) {
    Field f(grid);
    for (int i = 0; i < grid.size(); ++i)
        f.values[i] = lo + (hi - lo) * uniform01(rng);
    return f;
}

// Orthonormal basis of low Fourier harmonics (distinct modes are already
// discretely orthogonal; Gram-Schmidt tightens to roundoff).
inline ReducedBasis fourier_basis(const GridSpec& grid, int n) {
    using std::numbers::pi;
    std::vector<std::function<double(double, double)>> gens;
    gens.push_back([](double, double) { return 1.0; });
    for (int k = 1; gens.size() < static_cast<std::size_t>(n); ++k) {
        const double wx = 2.0 * pi * k / grid.lx;
        const double wy = 2.0 * pi * k / grid.ly;
        gens.push_back([wx](double x, double) { return std::sin(wx * x); });
        gens.push_back([wx](double x, double) { return std::cos(wx * x); });
        gens.push_back([wy](double, double y) { return std::sin(wy * y); });
        gens.push_back([wy](double, double y) { return std::cos(wy * y); });
        gens.push_back([wx, wy](double x, double y) { return std::sin(wx * x) * std::sin(wy * y); });
    }
    ReducedBasis rb;
    for (int k = 0; k < n; ++k) {
        Field v = project_initial(grid, gens[k]);
        for (int pass = 0; pass < 2; ++pass)
            for (const Field& psi : rb.psi)
                v.values -= inner_product(v, psi) * psi.values;
        v.values /= l2_norm(v);
        rb.psi.push_back(std::move(v));
    }
    return rb;
}

// Exact nodal interpolation data at prescribed DOFs (xi_m = canonical spikes,
// unit interpolation matrix).
inline EIData spike_ei(const GridSpec& grid, const std::vector<int>& q) {
    EIData ei;
    ei.grid = grid;
    ei.q = q;
    for (int dof : q)
        ei.xi.push_back(unit_field(grid, dof));
    const int m = static_cast<int>(q.size());
    ei.interp_matrix = Eigen::MatrixXd::Identity(m, m);
    ei.q_prime = restricted_dofs(ei.q, grid);
    ei.greedy_errors.assign(m, 0.0);
    ei.selected_snapshots.assign(m, 0);
    return ei;
}

}  // namespace frozenrb::testing
