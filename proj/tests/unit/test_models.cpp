#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "rvlab/models.hpp"
#include "rvlab/stats.hpp"

using namespace rvlab;

namespace {

double pareto_cdf(const MarginalSpec& m, double x) {
    if (x <= -m.scale) {
        return m.q() * std::pow(-x / m.scale, -m.alpha);
    }
    if (x < m.scale) {
        return m.q();
    }
    return 1.0 - m.p * std::pow(x / m.scale, -m.alpha);
}

}  // namespace

TEST_CASE("iid draws are reproducible and respect the Pareto support") {
    const ModelSpec spec = IidModel{{1.3, 0.4, 2.0}};
    const auto a = simulate_series(spec, 5, 99);
    const auto b = simulate_series(spec, 5, 99);
    CHECK(a == b);
    CHECK(a != simulate_series(spec, 5, 100));
    CHECK(a != simulate_series(spec, 5, 99, 1));
    for (double x : a) {
        CHECK(std::abs(x) >= 2.0);
    }
    CHECK_THROWS_AS(simulate_series(spec, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(simulate_series(IidModel{{2.5, 0.5, 1.0}}, 5, 1), std::invalid_argument);
}

TEST_CASE("moving average normalization and sign") {
    const auto spec = make_ma({0.5, 1.0, 1.0}, {1.0, 1.0});
    const auto& ma = std::get<MaModel>(spec);
    CHECK(ma.coefficients[0] == doctest::Approx(0.25));
    CHECK(ma.coefficients[1] == doctest::Approx(0.25));
    const auto x = simulate_series(spec, 10000, 3);
    CHECK(std::all_of(x.begin(), x.end(), [](double v) { return v >= 0.0; }));
    CHECK_THROWS_AS(make_ma({1.0, 1.0, 1.0}, {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_ma({1.0, 1.0, 1.0}, {}), std::invalid_argument);
}

TEST_CASE("garch tail index") {
    CHECK(garch_power_moment(1.0, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(garch_power_moment(1.0, 0.0, 2.0) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(garch_tail_index(1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(garch_log_moment(1.0, 0.0).value < 0.0);
    CHECK_THROWS_AS(make_garch11_squared(0.1, 3.0, 0.5), std::invalid_argument);

    const auto spec = make_garch11_squared(0.1, 1.0, 0.0);
    CHECK(tail_index(spec) == doctest::Approx(1.0).epsilon(1e-8));
    const auto x = simulate_series(spec, 1000000, 11);
    CHECK(std::all_of(x.begin(), x.end(), [](double v) { return v >= 0.0; }));
    CHECK(hill_tail_index(x, 2000) == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("analytic normalizing sequences") {
    const auto iid = normalizing_sequence(IidModel{{1.0, 1.0, 1.0}}, 100);
    CHECK(iid.value == doctest::Approx(100.0));
    CHECK(iid.method == "analytic");
    const auto ma = make_ma({0.5, 1.0, 1.0}, {0.25, 0.25});
    CHECK(normalizing_sequence(ma, 10000).value == doctest::Approx(1e8));

    // The MA tail is only asymptotically Pareto; the empirical exceedance
    // rate at a_n for moderate n is close to 1 / n.
    const std::size_t n = 1000;
    const double a_n = normalizing_sequence(ma, n).value;
    const auto x = simulate_series(ma, 2000000, 21);
    const double rate = static_cast<double>(std::count_if(x.begin(), x.end(), [&](double v) { return v > a_n; })) /
                        static_cast<double>(x.size());
    CHECK(rate * n == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("empirical normalizing sequence for garch") {
    const auto spec = make_garch11_squared(0.1, 1.0, 0.0);
    const std::size_t n = 1000;
    const auto a = normalizing_sequence(spec, n);
    CHECK(a.method == "empirical");
    CHECK(a.calibration_length == 1000000);
    const auto x = simulate_series(spec, 1000000, 77);
    const double count = static_cast<double>(std::count_if(x.begin(), x.end(), [&](double v) { return v > a.value; }));
    const double scaled = static_cast<double>(n) * count / static_cast<double>(x.size());
    CHECK(scaled >= 0.8);
    CHECK(scaled <= 1.25);
}

TEST_CASE("closed-form centering") {
    const ModelSpec one_sided = IidModel{{0.5, 1.0, 1.0}};
    for (double a : {1.0, 4.0, 100.0, 1e6}) {
        const auto c = centering_sequence(one_sided, a);
        CHECK(c.method == "closed_form");
        CHECK(c.estimate.value == doctest::Approx(std::sqrt(a) - 1.0).epsilon(1e-12));
    }
    CHECK(centering_sequence(one_sided, 0.5).estimate.value == 0.0);
    CHECK(centering_sequence(IidModel{{1.2, 0.5, 1.0}}, 50.0).estimate.value == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(centering_sequence(IidModel{{1.0, 0.7, 2.0}}, 20.0).estimate.value ==
          doctest::Approx(0.4 * 2.0 * std::log(10.0)));

    // Monte Carlo cross-check of the closed form.
    Rng rng(8);
    std::vector<double> y(1000000);
    const double a = 100.0;
    for (auto& v : y) {
        const double x = sample_pareto({0.5, 1.0, 1.0}, rng);
        v = x <= a ? x : 0.0;
    }
    const auto mc = mean_with_se(y);
    CHECK(std::abs(mc.value - 9.0) < 4.0 * mc.se);
}

TEST_CASE("moving-average centering by conditional Monte Carlo") {
    const auto spec = make_ma({0.5, 1.0, 1.0}, {0.25, 0.25});
    const double bound = 1e4;
    const auto c = centering_sequence(spec, bound, {0x5eed, 200000});
    CHECK(c.method == "conditional_mc");
    CHECK(c.estimate.value >= 0.0);
    CHECK(c.estimate.se > 0.0);

    const auto x = simulate_series(spec, 2000000, 5);
    std::vector<double> y(x.size());
    std::transform(x.begin(), x.end(), y.begin(), [&](double v) { return v <= bound ? v : 0.0; });
    const auto direct = mean_with_se(y);
    CHECK(std::abs(c.estimate.value - direct.value) < 4.0 * std::hypot(c.estimate.se, direct.se));

    const auto two_sided = make_ma({1.5, 0.5, 1.0}, {1.0, 0.5, 0.2});
    CHECK(std::abs(centering_sequence(two_sided, 30.0, {1, 100000}).estimate.value) < 0.05);
}

TEST_CASE("stochastic volatility centering against the path average") {
    const ModelSpec spec = StochVolModel{{0.7, 1.0, 1.0}, 0.5, 0.3};
    const auto c = centering_sequence(spec, 50.0, {2, 400000});
    const auto x = simulate_series(spec, 2000000, 6);
    std::vector<double> y(x.size());
    std::transform(x.begin(), x.end(), y.begin(), [](double v) { return v <= 50.0 ? v : 0.0; });
    // The path values are dependent, so compare with a loose absolute margin.
    CHECK(c.estimate.value == doctest::Approx(mean(y)).epsilon(0.02));
    CHECK(std::all_of(x.begin(), x.end(), [](double v) { return v > 0.0; }));
}

TEST_CASE("partial-sum paths") {
    const std::vector<double> s{2.0, -2.0};
    const auto path = build_partial_sum_path(s, 2.0, 0.0);
    CHECK(path(0.0) == 0.0);
    CHECK(path(0.5) == 1.0);
    CHECK(path(1.0) == 0.0);
    CHECK(path.left_limit(1.0) == 1.0);
    CHECK_THROWS_AS(build_partial_sum_path(s, 0.0, 0.0), std::invalid_argument);

    const std::vector<double> t{1.0, 2.0, 6.0};
    CHECK(build_partial_sum_path(t, 3.0, 3.0).terminal_value() == 0.0);

    const auto x = simulate_series(IidModel{{0.9, 0.6, 1.0}}, 5000, 4);
    for (double b : {0.0, 0.37, -2.5}) {
        CHECK(build_partial_sum_path(x, 123.0, b).terminal_value() == partial_sum_terminal(x, 123.0, b));
    }
}

TEST_CASE("marginal regular variation and tail balance") {
    const MarginalSpec m{1.5, 0.3, 1.0};
    for (const ModelSpec& spec : {ModelSpec{IidModel{m}}, make_ma(m, {1.0, 0.5}),
                                  ModelSpec{StochVolModel{m, 0.5, 0.5}}, ModelSpec{IsolatedExtremesModel{m, 0.5}}}) {
        CAPTURE(model_name(spec));
        const auto x = simulate_series(spec, 1000000, 12);
        std::vector<double> absx(x.size());
        std::transform(x.begin(), x.end(), absx.begin(), [](double v) { return std::abs(v); });
        const double level = quantile(absx, 0.99);
        const auto above = [&](double t) {
            return static_cast<double>(std::count_if(absx.begin(), absx.end(), [&](double v) { return v > t; }));
        };
        const double n1 = above(level);
        const double n2 = above(2.0 * level);
        const double ratio = n2 / n1;
        // Binomial SE of the conditional proportion, inflated for the
        // within-cluster dependence of the MA and volatility models.
        const double se = 2.0 * std::sqrt(ratio * (1.0 - ratio) / n1);
        CHECK(std::abs(ratio - std::pow(2.0, -1.5)) < 3.0 * se + 0.02);

        const double positive =
            static_cast<double>(std::count_if(x.begin(), x.end(), [&](double v) { return v > level; }));
        CHECK(positive / n1 == doctest::Approx(0.3).epsilon(0.15));
    }
}

TEST_CASE("isolated-extremes marginal matches the target law") {
    const MarginalSpec m{0.8, 0.65, 1.5};
    const auto x = simulate_series(IsolatedExtremesModel{m, 0.5}, 1000000, 31);
    // Every tenth value: lag-10 correlation of the latent AR(1) is 0.5^10.
    std::vector<double> thin;
    for (std::size_t i = 0; i < x.size(); i += 10) {
        thin.push_back(x[i]);
    }
    std::sort(thin.begin(), thin.end());
    const double n = static_cast<double>(thin.size());
    double d = 0.0;
    for (std::size_t i = 0; i < thin.size(); ++i) {
        const double f = pareto_cdf(m, thin[i]);
        d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(i + 1) / n)});
    }
    // 1.63 / sqrt(n) is the 1% critical value of the one-sample statistic.
    CHECK(d * std::sqrt(n) < 1.63);
    CHECK(pareto_from_normal(m, 40.0) > 0.0);
    CHECK(pareto_from_normal(m, -40.0) < 0.0);
}

TEST_CASE("truncated shifted mean agrees with Monte Carlo") {
    const MarginalSpec m{1.3, 0.6, 1.0};
    Rng rng(44);
    for (const auto& [c, shift, bound] : {std::tuple{0.7, 0.0, 5.0}, std::tuple{0.5, 3.0, 10.0},
                                          std::tuple{1.0, -8.0, 4.0}, std::tuple{2.0, 1.0, 1.5}}) {
        std::vector<double> y(400000);
        for (auto& v : y) {
            const double w = c * sample_pareto(m, rng) + shift;
            v = std::abs(w) <= bound ? w : 0.0;
        }
        const auto mc = mean_with_se(y);
        CHECK(std::abs(truncated_shifted_mean(m, c, shift, bound) - mc.value) < 4.0 * mc.se + 1e-12);
    }
}
