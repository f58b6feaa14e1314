#pragma once

#include <string>
#include <vector>

namespace rvlab {

struct SurvivalCurve {
    std::string label;
    std::vector<double> sample;
};

/// Empirical survival functions P(X > x), x > 0, overlaid on log-log axes.
/// Only positive sample values contribute points; the probabilities are
/// relative to the full sample size.
std::string survival_overlay_svg(const std::string& title, const std::vector<SurvivalCurve>& curves);

/// Plain line plot of y against x, optionally with a logarithmic x axis.
std::string curve_svg(const std::string& title, const std::vector<double>& x, const std::vector<double>& y,
                      bool log_x = false);

}  // namespace rvlab
