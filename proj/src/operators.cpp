#include "frozenrb/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace frozenrb {

BurgersParams::BurgersParams(double mu_, double bx_, double by_, double lxf_lambda_)
    : mu(mu_), bx(bx_), by(by_), lxf_lambda(lxf_lambda_) {
    if (!(mu >= 1.0))
        throw std::invalid_argument("BurgersParams: mu must be >= 1");
    if (!std::isfinite(bx) || !std::isfinite(by))
        throw std::invalid_argument("BurgersParams: velocity must be finite");
    if (!(lxf_lambda > 0.0))
        throw std::invalid_argument("BurgersParams: need lxf_lambda > 0");
}

StencilRoles stencil_roles(int dof, const GridSpec& grid) {
    if (dof < 0 || dof >= grid.size())
        throw std::out_of_range("stencil_roles: DOF index out of range");
    const int i = dof % grid.nx;
    const int j = dof / grid.nx;
    return StencilRoles{
        dof,
        grid.index(i - 1, j),
        grid.index(i + 1, j),
        grid.index(i, j - 1),
        grid.index(i, j + 1),
    };
}

std::vector<int> stencil_of(int dof, const GridSpec& grid) {
    const StencilRoles r = stencil_roles(dof, grid);
    std::vector<int> out;
    out.reserve(5);
    for (int k : {r.c, r.w, r.e, r.s, r.n})
        if (std::find(out.begin(), out.end(), k) == out.end())
            out.push_back(k);
    return out;
}

namespace {

// u^mu with the value clamped at 0 before powering; mu = 1 is the exact
// identity (no clamp needed, keeps linear advection linear).
inline double flux_pow(double u, double mu) {
    if (mu == 1.0) return u;
    return std::pow(std::max(u, 0.0), mu);
}

// F_r'(u) = b*mu*u^(mu-1) - g, clamped power as above.
inline double wave_speed(double u, double b, double g, double mu) {
    if (mu == 1.0) return b - g;
    return b * mu * std::pow(std::max(u, 0.0), mu - 1.0) - g;
}

// LxF edge flux for F(u) = b*u^mu - g*u with a fixed dissipation speed.
inline double edge_flux(double uL, double uR, double b, double g, double mu, double a) {
    const double fL = b * flux_pow(uL, mu) - g * uL;
    const double fR = b * flux_pow(uR, mu) - g * uR;
    return 0.5 * (fL + fR) - 0.5 * a * (uR - uL);
}

}  // namespace

double eval_cell(const BurgersParams& p, const LieAlgebraVec& g,
                 double uC, double uW, double uE, double uS, double uN,
                 double dx, double dy) {
    const double a = 1.0 / p.lxf_lambda;
    const double fe = edge_flux(uC, uE, p.bx, g.x, p.mu, a);
    const double fw = edge_flux(uW, uC, p.bx, g.x, p.mu, a);
    const double fn = edge_flux(uC, uN, p.by, g.y, p.mu, a);
    const double fs = edge_flux(uS, uC, p.by, g.y, p.mu, a);
    return (fe - fw) / dx + (fn - fs) / dy;
}

Field frozen_op(const Field& v, const BurgersParams& p, const LieAlgebraVec& g) {
    if (!std::isfinite(g.x) || !std::isfinite(g.y))
        throw std::invalid_argument("frozen_op: non-finite Lie algebra element");
    const GridSpec& G = v.grid;
    Field out(G);
    for (int j = 0; j < G.ny; ++j) {
        const int jm = GridSpec::wrap(j - 1, G.ny) * G.nx;
        const int jp = GridSpec::wrap(j + 1, G.ny) * G.nx;
        const int jc = j * G.nx;
        for (int i = 0; i < G.nx; ++i) {
            const int im = GridSpec::wrap(i - 1, G.nx);
            const int ip = GridSpec::wrap(i + 1, G.nx);
            out.values[jc + i] = eval_cell(p, g,
                                           v.values[jc + i], v.values[jc + im], v.values[jc + ip],
                                           v.values[jm + i], v.values[jp + i], G.dx, G.dy);
        }
    }
    return out;
}

Field burgers_op(const Field& v, const BurgersParams& p) {
    return frozen_op(v, p, LieAlgebraVec{0.0, 0.0});
}

Field shift_op(const Field& v, int axis) {
    if (axis != 1 && axis != 2)
        throw std::invalid_argument("shift_op: axis must be 1 or 2");
    const GridSpec& G = v.grid;
    Field out(G);
    if (axis == 1) {
        const double inv = 1.0 / (2.0 * G.dx);
        for (int j = 0; j < G.ny; ++j) {
            const int jc = j * G.nx;
            for (int i = 0; i < G.nx; ++i) {
                const int im = GridSpec::wrap(i - 1, G.nx);
                const int ip = GridSpec::wrap(i + 1, G.nx);
                out.values[jc + i] = -(v.values[jc + ip] - v.values[jc + im]) * inv;
            }
        }
    } else {
        const double inv = 1.0 / (2.0 * G.dy);
        for (int j = 0; j < G.ny; ++j) {
            const int jm = GridSpec::wrap(j - 1, G.ny) * G.nx;
            const int jp = GridSpec::wrap(j + 1, G.ny) * G.nx;
            const int jc = j * G.nx;
            for (int i = 0; i < G.nx; ++i)
                out.values[jc + i] = -(v.values[jp + i] - v.values[jm + i]) * inv;
        }
    }
    return out;
}

std::vector<double> restricted_eval(OpTag tag, const BurgersParams& p, const LieAlgebraVec& g,
                                    const GridSpec& grid,
                                    const std::unordered_map<int, double>& dof_values,
                                    const std::vector<int>& targets) {
    const LieAlgebraVec ge = (tag == OpTag::plain) ? LieAlgebraVec{0.0, 0.0} : g;
    std::vector<double> out;
    out.reserve(targets.size());
    auto value_at = [&](int dof) {
        auto it = dof_values.find(dof);
        if (it == dof_values.end())
            throw std::invalid_argument("restricted_eval: stencil DOF " + std::to_string(dof) +
                                        " missing from dof_values");
        return it->second;
    };
    for (int t : targets) {
        const StencilRoles r = stencil_roles(t, grid);
        out.push_back(eval_cell(p, ge, value_at(r.c), value_at(r.w), value_at(r.e),
                                value_at(r.s), value_at(r.n), grid.dx, grid.dy));
    }
    return out;
}

double max_stable_dt(const Field& v, const BurgersParams& p, const LieAlgebraVec& g) {
    const double lo = v.values.minCoeff();
    const double hi = v.values.maxCoeff();
    // the wave speed is monotone in u, so the extremes are at the range ends
    auto axis_speed = [&](double b, double gr) {
        return std::max(std::abs(wave_speed(lo, b, gr, p.mu)),
                        std::abs(wave_speed(hi, b, gr, p.mu)));
    };
    const double sx = axis_speed(p.bx, g.x);
    const double sy = axis_speed(p.by, g.y);
    const double denom = sx / v.grid.dx + sy / v.grid.dy;
    if (denom <= 0.0)
        return std::numeric_limits<double>::infinity();
    return 1.0 / denom;
}

}  // namespace frozenrb
