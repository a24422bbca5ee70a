#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "frozenrb/grid.hpp"
#include "oracles.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>

using namespace frozenrb;
using namespace frozenrb::testing;
using std::numbers::pi;

TEST_CASE("GridSpec validation and indexing") {
    CHECK_THROWS_AS(GridSpec(1, 1, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(4, 1, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(GridSpec(4, 4, 0.0, 1.0), std::invalid_argument);

    GridSpec g(4, 4, 2.0, 1.0);
    CHECK(g.dx == doctest::Approx(0.5));
    CHECK(g.dy == doctest::Approx(0.25));
    CHECK(g.index(0, 0) == 0);
    CHECK(g.index(3, 0) == 3);
    CHECK(g.index(0, 1) == 4);
    // periodic wrap in both directions
    CHECK(g.index(-1, 0) == 3);
    CHECK(g.index(4, 0) == 0);
    CHECK(g.index(0, -1) == 12);
    CHECK(g.index(2, 7) == g.index(2, 3));
    CHECK(g.center_x(0) == doctest::Approx(0.25));
    CHECK(g.center_y(0) == doctest::Approx(0.125));
}

TEST_CASE("project_initial: constant, study datum, midpoint values") {
    GridSpec g(6, 4, 2.0, 1.0);
    Field one = project_initial(g, [](double, double) { return 1.0; });
    CHECK(one.values.minCoeff() == 1.0);
    CHECK(one.values.maxCoeff() == 1.0);

    GridSpec study(120, 60, 2.0, 1.0);
    Field u0 = project_initial(study, [](double x, double y) {
        return 0.5 * (1.0 + std::sin(2 * pi * x) * std::sin(2 * pi * y));
    });
    CHECK(u0.values.minCoeff() >= 0.0);
    CHECK(u0.values.maxCoeff() <= 1.0);

    // midpoint sampling of sin(2*pi*x) on 4 cells of [0,1]
    GridSpec small(4, 2, 1.0, 1.0);
    Field s = project_initial(small, [](double x, double) { return std::sin(2 * pi * x); });
    for (int i = 0; i < 4; ++i) {
        const double expect = std::sin(pi * (2 * i + 1) / 4.0);
        CHECK(s.values[i] == doctest::Approx(expect).epsilon(1e-15));
        CHECK(s.values[4 + i] == s.values[i]);
    }

    CHECK_THROWS_AS(project_initial(small, [](double x, double) { return 1.0 / (x - x); }),
                    std::domain_error);
}

TEST_CASE("project_initial is linear in f") {
    GridSpec g(8, 4, 2.0, 1.0);
    auto f1 = [](double x, double y) { return std::sin(pi * x) + y; };
    auto f2 = [](double x, double y) { return std::cos(pi * y) * x; };
    const double a = 1.75, b = -0.5;
    Field combo = project_initial(g, [&](double x, double y) { return a * f1(x, y) + b * f2(x, y); });
    Field p1 = project_initial(g, f1);
    Field p2 = project_initial(g, f2);
    // same arithmetic per cell, so equality is exact
    for (int i = 0; i < g.size(); ++i)
        CHECK(combo.values[i] == a * f1(g.center_x(i % g.nx), g.center_y(i / g.nx)) +
                                     b * f2(g.center_x(i % g.nx), g.center_y(i / g.nx)));
    CHECK((combo.values - (a * p1.values + b * p2.values)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("inner_product: area, disjoint supports, analytic quadrature") {
    GridSpec g(120, 60, 2.0, 1.0);
    Field one = project_initial(g, [](double, double) { return 1.0; });
    CHECK(inner_product(one, one) == doctest::Approx(2.0).epsilon(1e-14));

    Field e3 = unit_field(g, 3), e9 = unit_field(g, 9);
    CHECK(inner_product(e3, e9) == 0.0);
    CHECK(inner_product(e3, e3) == doctest::Approx(g.dx * g.dy));

    // int of u0^2 over the domain is area*(1/4 + 1/16) = 0.625; the midpoint
    // rule resolves the involved harmonics exactly on this grid
    Field u0 = project_initial(g, [](double x, double y) {
        return 0.5 * (1.0 + std::sin(2 * pi * x) * std::sin(2 * pi * y));
    });
    CHECK(inner_product(u0, u0) == doctest::Approx(0.625).epsilon(1e-12));

    GridSpec other(60, 30, 2.0, 1.0);
    Field v(other);
    CHECK_THROWS_AS(inner_product(u0, v), std::invalid_argument);
}

TEST_CASE("shift_field: identity, column shift, half-cell spike") {
    GridSpec g(8, 4, 2.0, 1.0);
    std::mt19937_64 rng(11);
    Field v = random_field(g, rng);

    Field same = shift_field(v, {0.0, 0.0});
    CHECK(same.values == v.values);

    Field col = shift_field(v, {g.dx, 0.0});
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            CHECK(col.at(i, j) == v.at(i - 1, j));

    // half-cell shift of a spike splits it into two half-weight spikes
    Field spike = unit_field(g, g.index(3, 2));
    Field half = shift_field(spike, {0.5 * g.dx, 0.0});
    CHECK(half.at(3, 2) == doctest::Approx(0.5));
    CHECK(half.at(4, 2) == doctest::Approx(0.5));
    CHECK(half.values.cwiseAbs().sum() == doctest::Approx(1.0));
}

TEST_CASE("shift_field: integer-cell composition is an exact permutation") {
    GridSpec g(12, 6, 2.0, 1.0);
    std::mt19937_64 rng(5);
    Field v = random_field(g, rng);
    for (int t = 0; t < 20; ++t) {
        const int mx = static_cast<int>(rng() % 25) - 12;
        const int my = static_cast<int>(rng() % 25) - 12;
        const int nx_ = static_cast<int>(rng() % 25) - 12;
        const int ny_ = static_cast<int>(rng() % 25) - 12;
        GroupVec a{mx * g.dx, my * g.dy}, b{nx_ * g.dx, ny_ * g.dy};
        Field two = shift_field(shift_field(v, a), b);
        Field one = shift_field(v, {(mx + nx_) * g.dx, (my + ny_) * g.dy});
        CHECK(two.values == one.values);
    }
    // g and g + (lx, ly) act identically
    Field s1 = shift_field(v, {3 * g.dx, 2 * g.dy});
    Field s2 = shift_field(v, {3 * g.dx + g.lx, 2 * g.dy + g.ly});
    CHECK(s1.values == s2.values);
}

TEST_CASE("shift_field: inner product invariance under integer shifts") {
    GridSpec g(16, 8, 2.0, 1.0);
    std::mt19937_64 rng(17);
    Field v = random_field(g, rng), w = random_field(g, rng);
    const double ref = inner_product(v, w);
    for (int t = 0; t < 10; ++t) {
        const int mx = static_cast<int>(rng() % 16);
        const int my = static_cast<int>(rng() % 8);
        GroupVec gv{mx * g.dx, my * g.dy};
        const double ip = inner_product(shift_field(v, gv), shift_field(w, gv));
        // permutation of the summands; only summation order changes
        CHECK(ip == doctest::Approx(ref).epsilon(1e-13));
    }
}

TEST_CASE("shift_field conserves mass for fractional shifts") {
    GridSpec g(10, 6, 2.0, 1.0);
    std::mt19937_64 rng(23);
    Field v = random_field(g, rng);
    Field s = shift_field(v, {0.37 * g.dx, -1.73 * g.dy});
    CHECK(cell_sum(s) == doctest::Approx(cell_sum(v)).epsilon(1e-13));
}

TEST_CASE("compensated sum is exact on an adversarial sequence") {
    std::vector<double> xs = {1e16, 1.0, -1e16, 1.0, 0.5, -0.25};
    CHECK(compensated_sum(xs.data(), static_cast<long>(xs.size())) == 2.25);
}

TEST_CASE("field save/load round trip is bit exact") {
    GridSpec g(7, 5, 2.0, 1.0);
    std::mt19937_64 rng(31);
    Field v = random_field(g, rng, -3.0, 7.0);
    const std::string path =
        (std::filesystem::temp_directory_path() / "frozenrb_test_field.field").string();
    save_field(v, path);
    Field w = load_field(path);
    CHECK(w.grid == g);
    CHECK(w.values == v.values);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_field(path), std::runtime_error);
}
