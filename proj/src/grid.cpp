#include "frozenrb/grid.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace frozenrb {

GridSpec::GridSpec(int nx_, int ny_, double lx_, double ly_)
    : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("GridSpec: need nx >= 2 and ny >= 2");
    if (!(lx > 0.0) || !(ly > 0.0))
        throw std::invalid_argument("GridSpec: domain extents must be positive");
    dx = lx / nx;
    dy = ly / ny;
}

Field::Field(const GridSpec& g, Eigen::VectorXd v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
        throw std::invalid_argument("Field: value vector length does not match grid size");
}

Field project_initial(const GridSpec& grid, const std::function<double(double, double)>& f) {
    Field out(grid);
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const double v = f(grid.center_x(i), grid.center_y(j));
            if (!std::isfinite(v))
                throw std::domain_error("project_initial: non-finite value at cell center (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
            out.values[j * grid.nx + i] = v;
        }
    }
    return out;
}

Field unit_field(const GridSpec& grid, int dof) {
    if (dof < 0 || dof >= grid.size())
        throw std::out_of_range("unit_field: DOF index out of range");
    Field out(grid);
    out.values[dof] = 1.0;
    return out;
}

static void require_same_grid(const Field& a, const Field& b, const char* what) {
    if (!(a.grid == b.grid))
        throw std::invalid_argument(std::string(what) + ": fields live on different grids");
}

double inner_product(const Field& a, const Field& b) {
    require_same_grid(a, b, "inner_product");
    return a.grid.dx * a.grid.dy * a.values.dot(b.values);
}

double l2_norm(const Field& a) {
    return std::sqrt(a.grid.dx * a.grid.dy) * a.values.norm();
}

double compensated_sum(const double* x, long n) {
    double s = 0.0, comp = 0.0;
    for (long i = 0; i < n; ++i) {
        const double v = x[i];
        const double t = s + v;
        if (std::abs(s) >= std::abs(v))
            comp += (s - t) + v;
        else
            comp += (v - t) + s;
        s = t;
    }
    return s + comp;
}

double cell_sum(const Field& a) {
    return compensated_sum(a.values.data(), a.values.size());
}

namespace {

// Split a shift (in cell units) into integer offset and fractional weight,
// snapping to the integer when within 1e-9 cells so that integer-cell
// translations stay exact permutations under roundoff.
void split_shift(double cells, int& offset, double& frac) {
    const double snap = 1e-9;
    double fl = std::floor(cells);
    frac = cells - fl;
    if (frac < snap) {
        frac = 0.0;
    } else if (frac > 1.0 - snap) {
        frac = 0.0;
        fl += 1.0;
    }
    offset = static_cast<int>(std::llround(fl));
}

}  // namespace

Field shift_field(const Field& v, const GroupVec& g) {
    const GridSpec& G = v.grid;
    // out(i,j) samples v at center-index coordinates (i - g.x/dx, j - g.y/dy)
    int ox, oy;
    double fx, fy;
    split_shift(-g.x / G.dx, ox, fx);
    split_shift(-g.y / G.dy, oy, fy);

    Field out(G);
    if (fx == 0.0 && fy == 0.0) {
        // pure permutation path
        for (int j = 0; j < G.ny; ++j) {
            const int js = GridSpec::wrap(j + oy, G.ny);
            for (int i = 0; i < G.nx; ++i)
                out.values[j * G.nx + i] = v.values[js * G.nx + GridSpec::wrap(i + ox, G.nx)];
        }
        return out;
    }

    const double w00 = (1.0 - fx) * (1.0 - fy);
    const double w10 = fx * (1.0 - fy);
    const double w01 = (1.0 - fx) * fy;
    const double w11 = fx * fy;
    for (int j = 0; j < G.ny; ++j) {
        const int j0 = GridSpec::wrap(j + oy, G.ny);
        const int j1 = GridSpec::wrap(j0 + 1, G.ny);
        for (int i = 0; i < G.nx; ++i) {
            const int i0 = GridSpec::wrap(i + ox, G.nx);
            const int i1 = GridSpec::wrap(i0 + 1, G.nx);
            out.values[j * G.nx + i] = w00 * v.values[j0 * G.nx + i0] +
                                       w10 * v.values[j0 * G.nx + i1] +
                                       w01 * v.values[j1 * G.nx + i0] +
                                       w11 * v.values[j1 * G.nx + i1];
        }
    }
    return out;
}

static const char kFieldMagic[8] = {'F', 'R', 'B', 'F', 'L', 'D', '0', '1'};

void save_field(const Field& f, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("save_field: cannot open " + path);
    os.write(kFieldMagic, 8);
    const std::int32_t nx = f.grid.nx, ny = f.grid.ny;
    os.write(reinterpret_cast<const char*>(&nx), 4);
    os.write(reinterpret_cast<const char*>(&ny), 4);
    os.write(reinterpret_cast<const char*>(&f.grid.lx), 8);
    os.write(reinterpret_cast<const char*>(&f.grid.ly), 8);
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(sizeof(double)) * f.values.size());
    if (!os)
        throw std::runtime_error("save_field: write failed for " + path);
}

Field load_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("load_field: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kFieldMagic, 8) != 0)
        throw std::runtime_error("load_field: bad magic in " + path);
    std::int32_t nx = 0, ny = 0;
    double lx = 0, ly = 0;
    is.read(reinterpret_cast<char*>(&nx), 4);
    is.read(reinterpret_cast<char*>(&ny), 4);
    is.read(reinterpret_cast<char*>(&lx), 8);
    is.read(reinterpret_cast<char*>(&ly), 8);
    GridSpec g(nx, ny, lx, ly);
    Eigen::VectorXd vals(g.size());
    is.read(reinterpret_cast<char*>(vals.data()),
            static_cast<std::streamsize>(sizeof(double)) * vals.size());
    if (!is)
        throw std::runtime_error("load_field: truncated file " + path);
    return Field(g, std::move(vals));
}

}  // namespace frozenrb
