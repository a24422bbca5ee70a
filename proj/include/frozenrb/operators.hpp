#pragma once

#include "frozenrb/grid.hpp"

#include <unordered_map>
#include <vector>

namespace frozenrb {

/// Parameters of the convective problem d_t u + div(b u^mu) = 0, plus the
/// Lax-Friedrichs flux parameter: the numerical dissipation coefficient is
/// the fixed value 1/lxf_lambda, independent of the state and of the
/// Lie-algebra shift.
struct BurgersParams {
    explicit BurgersParams(double mu_, double bx_ = 1.0, double by_ = 1.0,
                           double lxf_lambda_ = 1.0);
    double mu;
    double bx, by;
    double lxf_lambda;
};

/// Element of the Lie algebra LG = R^2 (translation generators).
struct LieAlgebraVec {
    double x = 0.0;
    double y = 0.0;
};

enum class OpTag { plain, frozen };

/// Resolved 5-point stencil of one DOF: center, west, east, south, north.
/// Entries may coincide on very small grids.
struct StencilRoles {
    int c, w, e, s, n;
};

StencilRoles stencil_roles(int dof, const GridSpec& grid);

/// Deduplicated stencil DOF list (center, west, east, south, north order).
/// Size is at most 5, independent of the grid size.
std::vector<int> stencil_of(int dof, const GridSpec& grid);

/// Single-cell evaluation of the finite-volume flux divergence for the
/// combined flux F_r(u) = b_r*u^mu - g_r*u with Lax-Friedrichs dissipation
/// at the fixed coefficient 1/lxf_lambda. All operator paths below (full,
/// restricted, plain, frozen) funnel through this kernel, so restricted
/// evaluation and the g = 0 reduction are bit-exact by construction.
double eval_cell(const BurgersParams& p, const LieAlgebraVec& g,
                 double uC, double uW, double uE, double uS, double uN,
                 double dx, double dy);

/// Discrete operator L_mu(v): finite-volume divergence of b*u^mu.
Field burgers_op(const Field& v, const BurgersParams& p);

/// Frozen operator L^G_{mu,g}(v) = divergence of the combined flux
/// b*u^mu - g*u. Reduces bit-exactly to burgers_op when g = (0,0).
Field frozen_op(const Field& v, const BurgersParams& p, const LieAlgebraVec& g);

/// Lie-algebra shift operator S_r v = -d/dx_r v, periodic central
/// differences; axis is 1 or 2. Linear.
Field shift_op(const Field& v, int axis);

/// Evaluate selected components of the full operator touching only stencil
/// DOFs. dof_values must cover the stencil of every target; a missing DOF
/// raises std::invalid_argument naming the offending index.
std::vector<double> restricted_eval(OpTag tag, const BurgersParams& p, const LieAlgebraVec& g,
                                    const GridSpec& grid,
                                    const std::unordered_map<int, double>& dof_values,
                                    const std::vector<int>& targets);

/// CFL bound dt <= 1/(sx/dx + sy/dy) from the max combined wave speed over
/// the field's value range. Returns +inf when both speeds vanish.
double max_stable_dt(const Field& v, const BurgersParams& p, const LieAlgebraVec& g);

}  // namespace frozenrb
