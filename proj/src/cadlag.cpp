#include "rvlab/cadlag.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rvlab/csv.hpp"

namespace rvlab {

CadlagPath::CadlagPath(double initial_value, std::vector<Jump> jumps) : initial_(initial_value) {
    if (!std::isfinite(initial_value)) {
        throw std::invalid_argument("CadlagPath: initial value must be finite");
    }
    jumps_.reserve(jumps.size());
    double prev_time = 0.0;
    double prev_value = initial_value;
    for (const Jump& j : jumps) {
        if (!(j.time > prev_time) || j.time > 1.0) {
            throw std::invalid_argument("CadlagPath: jump times must be strictly increasing in (0, 1]");
        }
        if (!std::isfinite(j.value)) {
            throw std::invalid_argument("CadlagPath: jump value must be finite");
        }
        prev_time = j.time;
        if (j.value == prev_value) {
            continue;
        }
        jumps_.push_back(j);
        prev_value = j.value;
    }
}

CadlagPath CadlagPath::from_increments(double initial_value, std::span<const double> times,
                                       std::span<const double> increments) {
    if (times.size() != increments.size()) {
        throw std::invalid_argument("from_increments: size mismatch");
    }
    std::vector<Jump> jumps;
    jumps.reserve(times.size());
    double value = initial_value;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (i > 0 && times[i] < times[i - 1]) {
            throw std::invalid_argument("from_increments: times must be nondecreasing");
        }
        value += increments[i];
        if (!jumps.empty() && jumps.back().time == times[i]) {
            jumps.back().value = value;
        } else {
            jumps.push_back({times[i], value});
        }
    }
    return CadlagPath(initial_value, std::move(jumps));
}

double CadlagPath::operator()(double t) const {
    const auto it = std::upper_bound(jumps_.begin(), jumps_.end(), t,
                                     [](double x, const Jump& j) { return x < j.time; });
    return it == jumps_.begin() ? initial_ : std::prev(it)->value;
}

double CadlagPath::left_limit(double t) const {
    const auto it = std::lower_bound(jumps_.begin(), jumps_.end(), t,
                                     [](const Jump& j, double x) { return j.time < x; });
    return it == jumps_.begin() ? initial_ : std::prev(it)->value;
}

CompletedGraph completed_graph(const CadlagPath& path) {
    CompletedGraph g;
    g.vertices.reserve(2 * path.jumps().size() + 2);
    double value = path.initial_value();
    g.vertices.push_back({0.0, value});
    for (const Jump& j : path.jumps()) {
        g.vertices.push_back({j.time, value});
        g.vertices.push_back({j.time, j.value});
        value = j.value;
    }
    if (g.vertices.back().time < 1.0) {
        g.vertices.push_back({1.0, value});
    }
    return g;
}

namespace {

// Sorted union of jump times of both paths, with 0 prepended.
std::vector<double> breakpoints(const CadlagPath& a, const CadlagPath& b) {
    std::vector<double> t{0.0};
    t.reserve(a.jumps().size() + b.jumps().size() + 1);
    for (const auto& j : a.jumps()) {
        t.push_back(j.time);
    }
    for (const auto& j : b.jumps()) {
        t.push_back(j.time);
    }
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

}  // namespace

double uniform_distance(const CadlagPath& a, const CadlagPath& b) {
    double d = 0.0;
    for (double t : breakpoints(a, b)) {
        d = std::max(d, std::abs(a(t) - b(t)));
    }
    return d;
}

double l1_distance(const CadlagPath& a, const CadlagPath& b) {
    const auto t = breakpoints(a, b);
    double total = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double next = k + 1 < t.size() ? t[k + 1] : 1.0;
        total += std::abs(a(t[k]) - b(t[k])) * (next - t[k]);
    }
    return total;
}

namespace {

struct Interval {
    double lo = 1.0;
    double hi = 0.0;
    bool empty() const { return lo > hi; }
    bool has_start() const { return !empty() && lo <= 0.0; }
    bool has_end() const { return !empty() && hi >= 1.0; }
};

constexpr Interval kEmpty{};

double linf(const GraphPoint& p, const GraphPoint& q) {
    return std::max(std::abs(p.time - q.time), std::abs(p.value - q.value));
}

// Parameters s in [0, 1] with |a + s (b - a) - q|_inf <= eps.
Interval free_interval(const GraphPoint& a, const GraphPoint& b, const GraphPoint& q, double eps) {
    Interval out{0.0, 1.0};
    auto restrict_axis = [&](double start, double delta, double target) {
        if (delta == 0.0) {
            if (std::abs(start - target) > eps) {
                out = kEmpty;
            }
            return;
        }
        double s0 = (target - eps - start) / delta;
        double s1 = (target + eps - start) / delta;
        if (s0 > s1) {
            std::swap(s0, s1);
        }
        out.lo = std::max(out.lo, s0);
        out.hi = std::min(out.hi, s1);
    };
    restrict_axis(a.time, b.time - a.time, q.time);
    if (!out.empty()) {
        restrict_axis(a.value, b.value - a.value, q.value);
    }
    return out.empty() ? kEmpty : out;
}

Interval clip_from(const Interval& iv, double from) {
    Interval out{std::max(iv.lo, from), iv.hi};
    return out.empty() ? kEmpty : out;
}

// Alt-Godau reachability sweep over the free space of two polylines.
bool frechet_within(const std::vector<GraphPoint>& p, const std::vector<GraphPoint>& q, double eps) {
    const std::size_t np = p.size();
    const std::size_t nq = q.size();
    if (linf(p.front(), q.front()) > eps || linf(p.back(), q.back()) > eps) {
        return false;
    }
    // Reachable part of the left edge of each cell in the current column
    // (vertex p[i] against segment q[j]q[j+1]).
    std::vector<Interval> left(nq - 1);
    bool chained = true;
    for (std::size_t j = 0; j + 1 < nq; ++j) {
        const Interval f = free_interval(q[j], q[j + 1], p[0], eps);
        left[j] = (chained && f.has_start()) ? f : kEmpty;
        chained = left[j].has_end();
    }
    std::vector<Interval> next_left(nq - 1);
    bool bottom_chained = true;
    Interval top_of_last_column = kEmpty;
    for (std::size_t i = 0; i + 1 < np; ++i) {
        // Bottom edge of cell (i, 0): segment p[i]p[i+1] against q[0].
        const Interval fb = free_interval(p[i], p[i + 1], q[0], eps);
        Interval bottom = (bottom_chained && fb.has_start()) ? fb : kEmpty;
        bottom_chained = bottom.has_end();
        for (std::size_t j = 0; j + 1 < nq; ++j) {
            const Interval& l = left[j];
            const Interval top_free = free_interval(p[i], p[i + 1], q[j + 1], eps);
            const Interval right_free = free_interval(q[j], q[j + 1], p[i + 1], eps);
            Interval top = kEmpty;
            Interval right = kEmpty;
            if (!l.empty()) {
                top = top_free;
            } else if (!bottom.empty()) {
                top = clip_from(top_free, bottom.lo);
            }
            if (!bottom.empty()) {
                right = right_free;
            } else if (!l.empty()) {
                right = clip_from(right_free, l.lo);
            }
            next_left[j] = right;
            bottom = top;
        }
        top_of_last_column = bottom;
        std::swap(left, next_left);
    }
    return left.back().has_end() || top_of_last_column.has_end();
}

}  // namespace

bool m1_within(const CadlagPath& a, const CadlagPath& b, double eps) {
    if (eps < 0.0) {
        return false;
    }
    return frechet_within(completed_graph(a).vertices, completed_graph(b).vertices, eps);
}

double m1_distance(const CadlagPath& a, const CadlagPath& b, double tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("m1_distance: tol must be positive");
    }
    if (a == b) {
        return 0.0;
    }
    const auto ga = completed_graph(a).vertices;
    const auto gb = completed_graph(b).vertices;
    double lo = std::max(linf(ga.front(), gb.front()), linf(ga.back(), gb.back()));
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -vmin;
    for (const auto* g : {&ga, &gb}) {
        for (const auto& v : *g) {
            vmin = std::min(vmin, v.value);
            vmax = std::max(vmax, v.value);
        }
    }
    double hi = std::max(1.0, vmax - vmin);
    if (frechet_within(ga, gb, lo)) {
        return lo;
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (frechet_within(ga, gb, mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

CadlagPath read_path_csv(std::istream& in) {
    const CsvTable table = read_csv(in);
    const std::size_t tc = table.column("t");
    const std::size_t vc = table.column("value");
    std::map<double, double> rows;
    for (const auto& row : table.rows) {
        if (!rows.emplace(row[tc], row[vc]).second) {
            throw std::runtime_error("path csv: duplicate time " + std::to_string(row[tc]));
        }
    }
    const auto first = rows.find(0.0);
    if (first == rows.end()) {
        throw std::runtime_error("path csv: missing initial value row at t = 0");
    }
    std::vector<Jump> jumps;
    for (const auto& [t, v] : rows) {
        if (t < 0.0) {
            throw std::runtime_error("path csv: negative time");
        }
        if (t > 0.0) {
            jumps.push_back({t, v});
        }
    }
    return CadlagPath(first->second, std::move(jumps));
}

void write_path_csv(std::ostream& out, const CadlagPath& path) {
    out << "t,value\n";
    out.precision(std::numeric_limits<double>::max_digits10);
    out << 0 << ',' << path.initial_value() << '\n';
    for (const auto& j : path.jumps()) {
        out << j.time << ',' << j.value << '\n';
    }
}

}  // namespace rvlab
