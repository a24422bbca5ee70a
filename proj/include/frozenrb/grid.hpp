#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>

namespace frozenrb {

/// Periodic structured grid on [0,lx) x [0,ly).
///
/// Cell (i,j) has its center at ((i+1/2)*dx, (j+1/2)*dy) and degree-of-freedom
/// index j*nx + i (row-major, i fastest). All index arithmetic wraps
/// periodically in both directions.
struct GridSpec {
    GridSpec(int nx, int ny, double lx, double ly);

    int nx, ny;
    double lx, ly;
    double dx, dy;

    int size() const { return nx * ny; }

    /// DOF index of cell (i,j), wrapping periodically.
    int index(int i, int j) const {
        return wrap(j, ny) * nx + wrap(i, nx);
    }

    double center_x(int i) const { return (i + 0.5) * dx; }
    double center_y(int j) const { return (j + 0.5) * dy; }

    bool operator==(const GridSpec& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }

    static int wrap(int k, int n) {
        k %= n;
        return k < 0 ? k + n : k;
    }
};

/// A discrete function: nx*ny cell values on a periodic grid.
/// Immutable by convention once constructed; all operations below are pure.
struct Field {
    explicit Field(const GridSpec& g) : grid(g), values(Eigen::VectorXd::Zero(g.size())) {}
    Field(const GridSpec& g, Eigen::VectorXd v);

    GridSpec grid;
    Eigen::VectorXd values;

    double at(int i, int j) const { return values[grid.index(i, j)]; }
    int size() const { return static_cast<int>(values.size()); }
};

/// Translation vector g in G = R^2. The action on fields is periodic, so
/// g and g + (lx, ly) act identically.
struct GroupVec {
    double x = 0.0;
    double y = 0.0;

    GroupVec operator+(const GroupVec& o) const { return {x + o.x, y + o.y}; }
    GroupVec operator-(const GroupVec& o) const { return {x - o.x, y - o.y}; }
};

/// Sample a scalar function at cell centers (midpoint projection).
/// Throws std::domain_error if f is non-finite at any center.
Field project_initial(const GridSpec& grid, const std::function<double(double, double)>& f);

/// Canonical unit field: 1 at the given DOF, 0 elsewhere.
Field unit_field(const GridSpec& grid, int dof);

/// Discrete L2 inner product dx*dy*sum_i a_i*b_i. Throws on grid mismatch.
double inner_product(const Field& a, const Field& b);

double l2_norm(const Field& a);

/// Compensated (Neumaier) sum of the raw cell values; used for mass checks.
double cell_sum(const Field& a);
double compensated_sum(const double* x, long n);

/// Periodic translate of v by g: out(x) = v(x - g), bilinear interpolation on
/// cell centers. Shifts within 1e-9 cells of an integer are applied as exact
/// permutations (no arithmetic on the values).
Field shift_field(const Field& v, const GroupVec& g);

/// Binary field dump: magic, nx, ny, lx, ly header, then H doubles row-major.
void save_field(const Field& f, const std::string& path);
Field load_field(const std::string& path);

}  // namespace frozenrb
