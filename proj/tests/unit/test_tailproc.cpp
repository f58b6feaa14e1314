#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "rvlab/tailproc.hpp"

using namespace rvlab;

namespace {

MaModel ma(double alpha, double p, std::vector<double> c) { return std::get<MaModel>(make_ma({alpha, p, 1.0}, c)); }

}  // namespace

TEST_CASE("MA tail process windows") {
    Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const auto w = ma_tail_process({1.0}, 1.2, 0.5, rng, -3, 3);
        CHECK(std::abs(w.y0()) >= 1.0);
        for (int lag = -3; lag <= 3; ++lag) {
            if (lag != 0) {
                CHECK(w.at(lag) == 0.0);
            }
        }
    }
    const std::vector<double> c{0.6, 0.3};
    std::size_t k_zero = 0;
    for (int i = 0; i < 2000; ++i) {
        const auto w = ma_tail_process(c, 1.0, 1.0, rng, -1, 1);
        CHECK(w.y0() > 0.0);
        CHECK(w.at(1) >= 0.0);
        CHECK(w.at(-1) >= 0.0);
        if (w.at(-1) == 0.0) {
            ++k_zero;
            CHECK(w.at(1) / w.y0() == doctest::Approx(0.5));
        } else {
            CHECK(w.at(1) == 0.0);
            CHECK(w.at(-1) / w.y0() == doctest::Approx(2.0));
        }
    }
    // P(K = 0) = c_0^alpha / sum c^alpha = 2/3.
    CHECK(static_cast<double>(k_zero) / 2000.0 == doctest::Approx(2.0 / 3.0).epsilon(0.06));
    CHECK(ma_tail_process(c, 1.0, 1.0, std::uint64_t{4}, -1, 1).values ==
          ma_tail_process(c, 1.0, 1.0, std::uint64_t{4}, -1, 1).values);
    CHECK_THROWS_AS(ma_tail_process(c, 1.0, 1.0, rng, 1, 2), std::invalid_argument);
}

TEST_CASE("tail windows have no opposite-sign values") {
    const auto s = tail_sampler(ma(1.3, 0.4, {1.0, 0.7, 0.2}));
    Rng rng(2);
    for (int i = 0; i < 5000; ++i) {
        const auto w = s.draw(rng);
        bool pos = false;
        bool neg = false;
        for (double v : w.values) {
            pos |= v > 0.0;
            neg |= v < 0.0;
        }
        CHECK_FALSE((pos && neg));
    }
}

TEST_CASE("extremal index") {
    CHECK(extremal_index_theoretical(IidModel{{1.0, 0.5, 1.0}}) == 1.0);
    CHECK(extremal_index_ma({0.5, 0.5}, 1.0) == doctest::Approx(0.5));
    CHECK(extremal_index_ma({0.25, 0.25}, 0.5) == doctest::Approx(0.5));
    CHECK(extremal_index_ma({1.0, 2.0, 1.0}, 1.5) < 1.0);
    CHECK_THROWS_AS(extremal_index_theoretical(Garch11SquaredModel{}), std::invalid_argument);

    const auto m = ma(1.0, 1.0, {0.5, 0.5});
    const auto mc = extremal_index_mc(tail_sampler(m), 100000, 9);
    CHECK(std::abs(mc.value - 0.5) < 3.0 * mc.se + 1e-12);
    const auto m3 = ma(0.7, 0.5, {1.0, 3.0, 0.5});
    const auto mc3 = extremal_index_mc(tail_sampler(m3), 100000, 10);
    CHECK(std::abs(mc3.value - extremal_index_ma({1.0, 3.0, 0.5}, 0.7)) < 4.0 * mc3.se);
    CHECK(extremal_index_mc(iid_tail_sampler(1.0, 1.0), 1000, 1).value == 1.0);
    CHECK_THROWS_AS(extremal_index_mc(ma_tail_sampler(m, -1, 0), 1000, 1), std::invalid_argument);
}

TEST_CASE("cluster process rejection sampling") {
    const auto iid = iid_tail_sampler(1.0, 0.3);
    const auto draw = sample_cluster_process(iid, std::uint64_t{5});
    CHECK(draw.attempts == 1);
    CHECK(draw.marks.size() == 1);
    CHECK(cluster_acceptance_rate(iid, 1000, 3).value == 1.0);

    const auto s = tail_sampler(ma(1.0, 1.0, {0.5, 0.5}));
    const auto rate = cluster_acceptance_rate(s, 100000, 6);
    CHECK(std::abs(rate.value - 0.5) < 3.0 * rate.se);
    Rng rng(7);
    for (int i = 0; i < 500; ++i) {
        for (double v : sample_cluster_process(s, rng).marks) {
            CHECK(v > 0.0);
        }
    }
    TailSampler never = iid;
    never.lag_min = never.exact_lag_min = -1;
    never.draw = [](Rng&) { return TailWindow{-1, {5.0, 2.0}}; };
    CHECK_THROWS_AS(sample_cluster_process(never, std::uint64_t{1}, 1000), std::runtime_error);
}

TEST_CASE("nu^(u) tails") {
    const auto iid = iid_tail_sampler(1.4, 0.6);
    const auto e = nu_u_tail(1.0, 1.0, iid, 100000, 11);
    CHECK(std::abs(e.value - 0.6) < 3.0 * e.se);
    const auto neg = nu_u_tail(0.5, 2.0, iid, 100000, 11, -1);
    CHECK(std::abs(neg.value - 0.4 * std::pow(2.0, -1.4)) < 3.0 * neg.se);
    CHECK_THROWS_AS(nu_u_tail(1.0, 1.0, iid, 50, 1), std::invalid_argument);
    CHECK_THROWS_AS(nu_u_tail(0.0, 1.0, iid, 500, 1), std::invalid_argument);

    const auto counts = nu_u_counts(0.1, {0.2, 0.5, 1.0, 2.0, 4.0}, iid, 20000, 2);
    for (std::size_t j = 1; j < counts.x.size(); ++j) {
        CHECK(counts.positive[j] <= counts.positive[j - 1]);
    }

    const auto s = tail_sampler(ma(1.0, 1.0, {0.5, 0.5}));
    const auto ma_tail = nu_u_tail(1e-3, 1.0, s, 200000, 12);
    CHECK(std::abs(ma_tail.value - 1.0) < 3.0 * ma_tail.se + 0.01);
}

TEST_CASE("Levy triples") {
    const auto iid = levy_triple_ma({1.0}, 1.5, 0.3);
    CHECK(iid.c_plus == doctest::Approx(0.3));
    CHECK(iid.c_minus == doctest::Approx(0.7));
    CHECK(iid.b == doctest::Approx(0.0));
    const auto t = levy_triple_ma({0.25, 0.25}, 0.5, 1.0);
    CHECK(t.c_plus == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(t.c_minus == 0.0);
    CHECK(t.b == doctest::Approx(std::sqrt(0.5) - 1.0).epsilon(1e-12));
    CHECK(levy_triple_ma({1.0, 2.0}, 1.5, 0.5).b == 0.0);
    CHECK_THROWS_AS(levy_triple_ma({0.5, 0.5}, 1.0, 1.0), std::invalid_argument);
    for (double s : {0.5, 2.0, 7.0}) {
        CHECK(t.tail_plus(s * 1.3) == doctest::Approx(std::pow(s, -0.5) * t.tail_plus(1.3)));
    }

    const auto model = ma(0.5, 1.0, {0.25, 0.25});
    const auto mc = levy_triple_spectral(tail_sampler(model), 200000, 3);
    CHECK(std::abs(mc.triple.c_plus - t.c_plus) < 3.0 * mc.se_c_plus);
    CHECK(mc.triple.c_minus == 0.0);
    CHECK(std::abs(mc.triple.b - t.b) < 3.0 * mc.se_b);

    const auto two = ma(1.3, 0.3, {1.0, 0.6, 0.4});
    const auto closed = levy_triple_ma(two);
    const auto est = levy_triple_spectral(tail_sampler(two), 200000, 4);
    CHECK(std::abs(est.triple.c_plus - closed.c_plus) < 3.0 * est.se_c_plus);
    CHECK(std::abs(est.triple.c_minus - closed.c_minus) < 3.0 * est.se_c_minus);

    const auto back = triple_from_json(triple_to_json(est));
    CHECK(back.triple.c_plus == est.triple.c_plus);
    CHECK(back.method == "monte_carlo");
    CHECK(back.reps == 200000);
}

TEST_CASE("nu^(u) scaling for the MA triple") {
    const auto s = tail_sampler(ma(0.5, 1.0, {0.25, 0.25}));
    const auto counts = nu_u_counts(1e-3, {1.0, 2.0}, s, 100000, 21);
    const double n1 = static_cast<double>(counts.positive[0]);
    const double ratio = static_cast<double>(counts.positive[1]) / n1;
    const double se = std::sqrt(ratio * (1.0 - ratio) / n1);
    CHECK(std::abs(ratio - std::pow(2.0, -0.5)) < 3.0 * se);
    const double nu1 = std::pow(1e-3, -0.5) * n1 / 1e5;
    CHECK(nu1 == doctest::Approx(std::sqrt(0.5)).epsilon(0.1));
}

TEST_CASE("GARCH c_plus") {
    CHECK(normal_abs_moment(2.0) == doctest::Approx(1.0));
    CHECK(normal_abs_moment(4.0) == doctest::Approx(3.0));
    const auto a = garch_cplus(0.1, 1.0, 0.0, 1.0, 100000, 1000, 1);
    CHECK(a.estimate.value == doctest::Approx(1.0).epsilon(0.05));
    CHECK(a.truncation_last_term < 1e-6);
    const auto b = garch_cplus(0.1, 1.0, 0.0, 1.0, 100000, 2000, 2);
    CHECK(std::abs(a.estimate.value - b.estimate.value) < 2.0 * std::hypot(a.estimate.se, b.estimate.se));
    CHECK_THROWS_AS(garch_cplus(0.1, 1.0, 0.0, 1.5, 1000, 100, 1), std::invalid_argument);
    CHECK_THROWS_AS(garch_cplus(0.1, 4.0, 0.0, 1.0, 1000, 100, 1), std::invalid_argument);

    const double alpha1 = 0.5;
    const double kappa = garch_tail_index(alpha1, 0.0);
    CHECK(kappa > 1.0);
    const auto c = garch_cplus(0.1, alpha1, 0.0, kappa, 20000, 500, 3);
    CHECK(c.estimate.value > 0.0);
    CHECK(std::isfinite(c.estimate.value));
}

TEST_CASE("drift b_u") {
    const LevyTriple sym{1.5, 0.5, 0.5, 0.0};
    for (double u : {0.01, 0.1, 0.5}) {
        CHECK(drift_bu(u, sym, 0.5) == doctest::Approx(0.0));
        CHECK(drift_bu(u, LevyTriple{0.7, 1.0, 0.0, 0.0}, 1.0) == doctest::Approx(0.0));
    }
    const auto t = levy_triple_ma({0.25, 0.25}, 0.5, 1.0);
    const double small = drift_bu(1e-8, t, 1.0);
    CHECK(small == doctest::Approx(t.b).epsilon(1e-3));
    CHECK(std::abs(drift_bu(1e-2, t, 1.0) - t.b) > std::abs(small - t.b));
    CHECK_THROWS_AS(drift_bu(1.5, t, 1.0), std::invalid_argument);

    const auto iid = iid_tail_sampler(1.0, 1.0);
    const auto e = drift_bu(0.05, iid, 100000, 5);
    CHECK(std::abs(e.value) < 3.0 * e.se);

    const auto s = tail_sampler(ma(0.5, 1.0, {0.25, 0.25}));
    std::vector<double> us{0.1, 0.05, 0.02, 0.01};
    std::vector<double> bs;
    for (double u : us) {
        bs.push_back(drift_bu(u, s, 200000, 7).value);
    }
    CHECK(bs.back() == doctest::Approx(t.b).epsilon(0.05));
    CHECK(extrapolate_drift(us, bs, 0.5) == doctest::Approx(t.b).epsilon(0.15));
}
