#include "doctest.h"

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rvlab/cadlag.hpp"

using namespace rvlab;

TEST_CASE("path evaluation is right-continuous with left limits") {
    const CadlagPath x(1.0, {{0.25, 2.0}, {0.5, -1.0}});
    CHECK(x(0.0) == 1.0);
    CHECK(x(0.2499) == 1.0);
    CHECK(x(0.25) == 2.0);
    CHECK(x.left_limit(0.25) == 1.0);
    CHECK(x.left_limit(0.0) == 1.0);
    CHECK(x(1.0) == -1.0);
    CHECK(x.terminal_value() == -1.0);
}

TEST_CASE("path construction rejects bad jump times and drops null jumps") {
    CHECK_THROWS_AS(CadlagPath(0.0, {{0.3, 2.0}, {0.3, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(CadlagPath(0.0, {{0.0, 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(CadlagPath(0.0, {{1.5, 2.0}}), std::invalid_argument);
    const CadlagPath x(1.0, {{0.2, 1.0}, {0.4, 3.0}});
    REQUIRE(x.jumps().size() == 1);
    CHECK(x.jumps()[0].time == 0.4);
}

TEST_CASE("from_increments merges equal times") {
    const std::vector<double> t{0.5, 0.5, 0.75};
    const std::vector<double> dx{1.0, 2.0, -3.0};
    const auto x = CadlagPath::from_increments(0.0, t, dx);
    REQUIRE(x.jumps().size() == 2);
    CHECK(x(0.5) == 3.0);
    CHECK(x(0.9) == 0.0);
}

TEST_CASE("completed graph of constant and indicator paths") {
    const auto g0 = completed_graph(CadlagPath(0.0));
    REQUIRE(g0.vertices.size() == 2);
    CHECK(g0.vertices[0] == GraphPoint{0.0, 0.0});
    CHECK(g0.vertices[1] == GraphPoint{1.0, 0.0});

    const auto g = completed_graph(oracle::unit_step());
    REQUIRE(g.vertices.size() == 4);
    CHECK(g.vertices[0] == GraphPoint{0.0, 0.0});
    CHECK(g.vertices[1] == GraphPoint{0.5, 0.0});
    CHECK(g.vertices[2] == GraphPoint{0.5, 1.0});
    CHECK(g.vertices[3] == GraphPoint{1.0, 1.0});
}

TEST_CASE("completed graph alternates and reproduces the path off the jump times") {
    std::mt19937_64 gen(11);
    for (int rep = 0; rep < 50; ++rep) {
        const auto x = oracle::random_step_path(gen, 5);
        const auto g = completed_graph(x);
        CHECK(g.vertices.front().time == 0.0);
        CHECK(g.vertices.back().time == 1.0);
        for (std::size_t k = 1; k < g.vertices.size(); ++k) {
            const auto& a = g.vertices[k - 1];
            const auto& b = g.vertices[k];
            const bool horizontal = a.value == b.value && b.time > a.time;
            const bool vertical = a.time == b.time && a.value != b.value;
            CHECK((horizontal || vertical));
            if (horizontal) {
                CHECK(x(0.5 * (a.time + b.time)) == a.value);
            }
            if (k >= 2 && vertical) {
                CHECK(!(g.vertices[k - 2].time == a.time));
            }
        }
    }
}

TEST_CASE("uniform and L1 distances on the staircase example") {
    const auto x = oracle::unit_step();
    const auto x4 = oracle::staircase(4);
    CHECK(uniform_distance(x, x) == 0.0);
    CHECK(uniform_distance(x4, x) == doctest::Approx(0.5));
    CHECK(uniform_distance(CadlagPath(0.0), x) == 1.0);
    CHECK(l1_distance(x, x) == 0.0);
    CHECK(l1_distance(x4, x) == doctest::Approx(0.125));
    CHECK(l1_distance(CadlagPath(0.0), x) == doctest::Approx(0.5));
}

TEST_CASE("M1 distance of the staircase sequence is at most 1/n and decreasing") {
    const auto x = oracle::unit_step();
    double previous = 1.0;
    for (int n : {4, 8, 16}) {
        const double d = m1_distance(oracle::staircase(n), x);
        CHECK(d <= 1.0 / n + default_m1_tolerance);
        CHECK(d < previous);
        CHECK(uniform_distance(oracle::staircase(n), x) == 0.5);
        previous = d;
    }
}

TEST_CASE("M1 identity, tolerance contract and error path") {
    const auto x = oracle::unit_step();
    CHECK(m1_distance(x, x) == 0.0);
    CHECK_THROWS_AS(m1_distance(x, x, 0.0), std::invalid_argument);
    // Vertical shift by c of a single-jump path costs exactly c.
    const CadlagPath y(0.25, {{0.5, 1.25}});
    CHECK(m1_distance(x, y, 1e-9) == doctest::Approx(0.25).epsilon(1e-7));
    // Same jump at a different time costs the time shift.
    const CadlagPath z(0.0, {{0.6, 1.0}});
    CHECK(m1_distance(x, z, 1e-9) == doctest::Approx(0.1).epsilon(1e-7));
}

TEST_CASE("M1 agrees with the dense matching oracle on random 3-jump pairs") {
    std::mt19937_64 gen(2024);
    const double h = 4e-4;
    for (int rep = 0; rep < 25; ++rep) {
        const auto a = oracle::random_step_path(gen, 3);
        const auto b = oracle::random_step_path(gen, 3);
        const double d = m1_distance(a, b);
        const double ref = oracle::m1_grid(a, b, h);
        CHECK(d <= ref + default_m1_tolerance);
        CHECK(d >= ref - h - default_m1_tolerance);
        CHECK(std::abs(d - ref) <= 1e-3);
    }
}

TEST_CASE("M1 metric properties and domination by the uniform metric") {
    std::mt19937_64 gen(7);
    const double tol = default_m1_tolerance;
    for (int rep = 0; rep < 200; ++rep) {
        const auto a = oracle::random_step_path(gen, 4);
        const auto b = oracle::random_step_path(gen, 4);
        const auto c = oracle::random_step_path(gen, 4);
        const double ab = m1_distance(a, b);
        CHECK(ab >= 0.0);
        CHECK(std::abs(ab - m1_distance(b, a)) <= tol);
        CHECK(ab <= m1_distance(a, c) + m1_distance(c, b) + 3 * tol);
        CHECK(ab <= uniform_distance(a, b) + tol);
        CHECK(l1_distance(a, b) <= uniform_distance(a, b) + 1e-15);
    }
}

TEST_CASE("M1 on monotone pairs: endpoint lower bound and pointwise convergence") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> t;
        std::vector<double> dx;
        for (int k = 0; k < 4; ++k) {
            t.push_back(0.05 + 0.9 * unit(gen));
            dx.push_back(unit(gen));
        }
        std::sort(t.begin(), t.end());
        const auto a = CadlagPath::from_increments(unit(gen), t, dx);
        for (auto& v : dx) {
            v *= 0.5 + unit(gen);
        }
        const auto b = CadlagPath::from_increments(unit(gen), t, dx);
        const double d = m1_distance(a, b);
        const double endpoints = std::max(std::abs(a(0.0) - b(0.0)), std::abs(a(1.0) - b(1.0)));
        CHECK(d >= endpoints - default_m1_tolerance);
        CHECK(d <= uniform_distance(a, b) + default_m1_tolerance);
    }
    // Monotone approximations converging at every continuity point and at
    // the endpoints converge in M1.
    const auto limit = oracle::unit_step();
    double previous = 1.0;
    for (int n : {4, 16, 64, 256}) {
        std::vector<double> t;
        std::vector<double> dx;
        for (int k = 0; k < n; ++k) {
            t.push_back(0.5 - 1.0 / n + static_cast<double>(k) / (n * static_cast<double>(n)));
            dx.push_back(1.0 / n);
        }
        const auto xn = CadlagPath::from_increments(0.0, t, dx);
        const double d = m1_distance(xn, limit);
        CHECK(d <= 1.0 / n + default_m1_tolerance);
        CHECK(d <= previous);
        previous = d;
    }
}

TEST_CASE("path CSV round trip, unsorted input, duplicate rejection") {
    std::istringstream in("t,value\n0.5,2\n0,1\n0.75,-1\n");
    const auto x = read_path_csv(in);
    CHECK(x.initial_value() == 1.0);
    REQUIRE(x.jumps().size() == 2);
    CHECK(x(0.6) == 2.0);
    std::ostringstream out;
    write_path_csv(out, x);
    std::istringstream back(out.str());
    CHECK(read_path_csv(back) == x);

    std::istringstream dup("t,value\n0,1\n0.5,2\n0.5,3\n");
    CHECK_THROWS(read_path_csv(dup));
}
