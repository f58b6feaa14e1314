#include "doctest.h"

#include <random>
#include <sstream>

#include "generators.hpp"
#include "rvlab/pointproc.hpp"
#include "rvlab/rng.hpp"

using namespace rvlab;

TEST_CASE("time-space measure from a series") {
    const std::vector<double> x{2.0, -4.0};
    const auto m = build_time_space_measure(x, 2.0);
    REQUIRE(m.size() == 2);
    CHECK(m.atoms()[0] == Atom{0.5, 1.0});
    CHECK(m.atoms()[1] == Atom{1.0, -2.0});

    const std::vector<double> zeros(5, 0.0);
    CHECK(build_time_space_measure(zeros, 1.0).empty());
    CHECK_THROWS_AS(build_time_space_measure(x, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_time_space_measure(std::vector<double>{}, 1.0), std::invalid_argument);
}

TEST_CASE("atom count equals the number of nonzero entries") {
    Rng rng(5);
    std::vector<double> x(10000);
    std::size_t nonzero = 0;
    for (auto& v : x) {
        const double u = rng.uniform();
        v = u < 0.1 ? 0.0 : std::pow(u, -1.0 / 1.5);
        nonzero += v != 0.0;
    }
    CHECK(build_time_space_measure(x, 100.0).size() == nonzero);
}

TEST_CASE("summation functional filters small marks and merges shared times") {
    const PointMeasure m({{0.3, 2.0}, {0.6, -0.5}, {0.7, 3.0}});
    const auto path = summation_functional(m, 1.0);
    CHECK(path(0.0) == 0.0);
    CHECK(path(0.29) == 0.0);
    CHECK(path(0.3) == 2.0);
    CHECK(path(0.65) == 2.0);
    CHECK(path(0.7) == 5.0);
    CHECK(path(1.0) == 5.0);
    CHECK(path.jumps().size() == 2);

    CHECK(summation_functional(PointMeasure{}, 1.0) == CadlagPath(0.0));

    const PointMeasure same_time({{0.5, 2.0}, {0.5, 3.0}});
    const auto merged = summation_functional(same_time, 1.0);
    REQUIRE(merged.jumps().size() == 1);
    CHECK(merged(0.5) == 5.0);
    CHECK_THROWS_AS(summation_functional(m, 0.0), std::invalid_argument);
}

TEST_CASE("summation functional of N_n equals the truncated partial sum") {
    Rng rng(17);
    const std::size_t n = 500;
    const double a_n = 50.0;
    const double u = 0.3;
    std::vector<double> x(n);
    for (auto& v : x) {
        v = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::pow(rng.uniform(), -1.0 / 0.9);
    }
    const auto path = summation_functional(build_time_space_measure(x, a_n), u);
    double direct = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        const double z = x[k - 1] / a_n;
        if (std::abs(z) > u) {
            direct += z;
        }
        CHECK(path(static_cast<double>(k) / n) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("lambda membership") {
    CHECK(lambda_membership(PointMeasure({{0.5, 2.0}, {0.5, 3.0}}), 1.0).in_lambda2);
    const auto opposite = lambda_membership(PointMeasure({{0.5, 2.0}, {0.5, -3.0}}), 1.0);
    CHECK_FALSE(opposite.in_lambda2);
    CHECK(opposite.witnesses.size() == 2);
    CHECK_FALSE(lambda_membership(PointMeasure({{0.0, 2.0}}), 1.0).in_lambda1);
    CHECK_FALSE(lambda_membership(PointMeasure({{1.0, -2.0}}), 1.0).in_lambda1);
    CHECK(lambda_membership(PointMeasure({{0.0, 0.5}}), 1.0).in_lambda1);
    CHECK_FALSE(lambda_membership(PointMeasure({{0.4, -1.0}}), 1.0).in_lambda1);
    CHECK(lambda_membership(PointMeasure({{0.4, std::nextafter(1.0, 2.0)}}), 1.0).in_lambda());
}

TEST_CASE("psi^(u) is monotone in u and consistent under restriction") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<Atom> atoms;
        for (int k = 0; k < 20; ++k) {
            atoms.push_back({0.01 + 0.98 * unit(gen), (unit(gen) < 0.5 ? -1 : 1) * 3.0 * unit(gen) + 1e-9});
        }
        const PointMeasure m(atoms);
        const double u = 0.5 + unit(gen);
        const double v = 0.5 * u;
        const double w = u + unit(gen);
        // Restriction to E_v, v < u, does not change psi^(u).
        CHECK(summation_functional(m.restricted(v), u) == summation_functional(m, u));
        // Jump times of psi^(w) are among those of psi^(u) for w >= u.
        const auto pu = summation_functional(m, u);
        const auto pw = summation_functional(m, w);
        for (const auto& j : pw.jumps()) {
            const bool found = std::any_of(pu.jumps().begin(), pu.jumps().end(),
                                           [&](const Jump& k) { return k.time == j.time; });
            CHECK(found);
        }
    }
}

TEST_CASE("psi^(u) continuity bound on perturbed Lambda members") {
    std::mt19937_64 gen(404);
    const double delta = 1e-3;
    for (int rep = 0; rep < 40; ++rep) {
        const auto pair = gen::lambda_member_with_perturbation(gen, 1.0, delta, 10);
        REQUIRE(lambda_membership(pair.original, 1.0).in_lambda());
        const double d = m1_distance(summation_functional(pair.original, 1.0),
                                     summation_functional(pair.perturbed, 1.0), 1e-8);
        CHECK(d <= static_cast<double>(pair.big_atoms) * delta + 1e-6);
    }
}

TEST_CASE("measure CSV and JSON serialization") {
    const PointMeasure m({{0.25, 1.5}, {0.25, 2.5}, {0.75, -3.0}});
    std::ostringstream csv;
    write_measure_csv(csv, m);
    std::istringstream in(csv.str());
    CHECK(read_measure_csv(in) == m);
    CHECK(measure_from_json(measure_to_json(m)) == m);
    CHECK(measure_to_json(PointMeasure({{0.5, 2.0}})) == "[[0.5,2.0]]");
    CHECK_THROWS(measure_from_json("[[0.5]]"));
    CHECK_THROWS_AS(PointMeasure({{0.5, 0.0}}), std::invalid_argument);
}
