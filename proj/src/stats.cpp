#include "rvlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace rvlab {

double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t leaf = 32;
    if (values.size() <= leaf) {
        double s = 0.0;
        for (double v : values) {
            s += v;
        }
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("mean of empty sample");
    }
    return pairwise_sum(values) / static_cast<double>(values.size());
}

McEstimate mean_with_se(std::span<const double> values) {
    McEstimate out;
    out.reps = values.size();
    out.value = mean(values);
    if (values.size() < 2) {
        return out;
    }
    std::vector<double> sq(values.size());
    std::transform(values.begin(), values.end(), sq.begin(), [m = out.value](double v) {
        const double d = v - m;
        return d * d;
    });
    const double var = pairwise_sum(sq) / static_cast<double>(values.size() - 1);
    out.se = std::sqrt(var / static_cast<double>(values.size()));
    return out;
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (phat + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double quantile(std::vector<double> values, double prob) {
    if (values.empty()) {
        throw std::invalid_argument("quantile of empty sample");
    }
    if (!(prob >= 0.0 && prob <= 1.0)) {
        throw std::invalid_argument("quantile probability outside [0, 1]");
    }
    std::sort(values.begin(), values.end());
    const double h = prob * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

double hill_tail_index(std::span<const double> values, std::size_t k) {
    if (k < 1 || k >= values.size()) {
        throw std::invalid_argument("hill_tail_index: need 1 <= k < n");
    }
    std::vector<double> mags(values.size());
    std::transform(values.begin(), values.end(), mags.begin(), [](double v) { return std::abs(v); });
    std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k), mags.end(),
                     std::greater<>());
    const double threshold = mags[k];
    if (threshold <= 0.0) {
        throw std::invalid_argument("hill_tail_index: threshold order statistic is zero");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        s += std::log(mags[i] / threshold);
    }
    return static_cast<double>(k) / s;
}

double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) {
        return 1.0;
    }
    constexpr double pi = 3.14159265358979323846;
    if (lambda < 1.18) {
        // Theta-function form, fast for small lambda.
        const double y = std::exp(-pi * pi / (8.0 * lambda * lambda));
        double s = 0.0;
        for (int k = 1; k <= 50; ++k) {
            const double term = std::pow(y, static_cast<double>((2 * k - 1) * (2 * k - 1)));
            s += term;
            if (term < 1e-18) {
                break;
            }
        }
        return std::clamp(1.0 - std::sqrt(2.0 * pi) / lambda * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) {
            break;
        }
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.size() < 50 || b.size() < 50) {
        throw std::invalid_argument("ks_two_sample: both samples need at least 50 points");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) {
            ++i;
        }
        while (j < b.size() && b[j] == v) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    return {d, kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d)};
}

}  // namespace rvlab
