#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace rvlab {

struct Jump {
    double time = 0.0;   ///< in (0, 1]
    double value = 0.0;  ///< value of the path from `time` onwards

    bool operator==(const Jump&) const = default;
};

/// Right-continuous step function on [0, 1].
///
/// Jump times are strictly increasing in (0, 1]. Jumps that do not change
/// the value are dropped at construction, so every stored jump is a real
/// discontinuity.
class CadlagPath {
public:
    CadlagPath() = default;
    explicit CadlagPath(double initial_value, std::vector<Jump> jumps = {});

    /// Builds a path from increments at nondecreasing times; increments at an
    /// identical time are summed (in the given order) into one jump.
    static CadlagPath from_increments(double initial_value, std::span<const double> times,
                                      std::span<const double> increments);

    double initial_value() const { return initial_; }
    const std::vector<Jump>& jumps() const { return jumps_; }

    /// x(t); right-continuous.
    double operator()(double t) const;
    /// x(t-); equals the initial value at t = 0.
    double left_limit(double t) const;
    double terminal_value() const { return jumps_.empty() ? initial_ : jumps_.back().value; }

    bool operator==(const CadlagPath&) const = default;

private:
    double initial_ = 0.0;
    std::vector<Jump> jumps_;
};

struct GraphPoint {
    double time = 0.0;
    double value = 0.0;
    bool operator==(const GraphPoint&) const = default;
};

/// Completed graph as a polyline visited in graph order: horizontal pieces
/// for the constant stretches, vertical pieces from x(t-) to x(t) at jumps.
struct CompletedGraph {
    std::vector<GraphPoint> vertices;
};

CompletedGraph completed_graph(const CadlagPath& path);

/// sup_t |a(t) - b(t)|, exact for step paths.
double uniform_distance(const CadlagPath& a, const CadlagPath& b);

/// Integral of |a(t) - b(t)| over [0, 1], exact for step paths.
double l1_distance(const CadlagPath& a, const CadlagPath& b);

inline constexpr double default_m1_tolerance = 1e-6;

/// True iff some pair of parametric representations keeps both the time and
/// space discrepancy within eps, i.e. the L-infinity Frechet distance between
/// the completed graphs is at most eps.
bool m1_within(const CadlagPath& a, const CadlagPath& b, double eps);

/// Skorohod M1 distance, returned as an upper bound d with d - d_M1 <= tol.
double m1_distance(const CadlagPath& a, const CadlagPath& b, double tol = default_m1_tolerance);

/// CSV with header `t,value`: one row at t = 0 for the initial value and
/// one row per jump. Rows may be unsorted; duplicate times are rejected.
CadlagPath read_path_csv(std::istream& in);
void write_path_csv(std::ostream& out, const CadlagPath& path);

}  // namespace rvlab
