#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rvlab/cadlag.hpp"

namespace rvlab {

struct Atom {
    double time = 0.0;  ///< in [0, 1]
    double mark = 0.0;  ///< finite, nonzero
    bool operator==(const Atom&) const = default;
};

/// Finite point measure on [0, 1] x (R \ {0}). Atoms may share a time.
class PointMeasure {
public:
    PointMeasure() = default;
    explicit PointMeasure(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    /// Atoms with |mark| > u, in their original order.
    PointMeasure restricted(double u) const;

    bool operator==(const PointMeasure&) const = default;

private:
    std::vector<Atom> atoms_;
};

/// N_n = sum_i delta_(i/n, X_i / a_n), skipping zero entries.
PointMeasure build_time_space_measure(std::span<const double> series, double a_n);

/// psi^(u): running sum of the marks with |mark| > u. Atoms sharing a time
/// collapse into one jump. Atoms at time 0 enter the initial value.
CadlagPath summation_functional(const PointMeasure& m, double u);

struct LambdaReport {
    bool in_lambda1 = true;
    bool in_lambda2 = true;
    std::vector<Atom> witnesses;

    bool in_lambda() const { return in_lambda1 && in_lambda2; }
};

/// Membership in the continuity set of psi^(u): no atom with |mark| > u at
/// time 0 or 1, no mark exactly at +-u, and no time carrying marks of both
/// signs. Comparisons with u are exact.
LambdaReport lambda_membership(const PointMeasure& m, double u);

/// CSV `time,mark`.
PointMeasure read_measure_csv(std::istream& in);
void write_measure_csv(std::ostream& out, const PointMeasure& m);

/// JSON array of [time, mark] pairs.
std::string measure_to_json(const PointMeasure& m);
PointMeasure measure_from_json(const std::string& text);

}  // namespace rvlab
