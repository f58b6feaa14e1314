#include "rvlab/pointproc.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "json.hpp"
#include "rvlab/csv.hpp"

namespace rvlab {

PointMeasure::PointMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    for (const Atom& a : atoms_) {
        if (!(a.time >= 0.0 && a.time <= 1.0)) {
            throw std::invalid_argument("PointMeasure: atom time outside [0, 1]");
        }
        if (!std::isfinite(a.mark) || a.mark == 0.0) {
            throw std::invalid_argument("PointMeasure: marks must be finite and nonzero");
        }
    }
}

PointMeasure PointMeasure::restricted(double u) const {
    std::vector<Atom> kept;
    std::copy_if(atoms_.begin(), atoms_.end(), std::back_inserter(kept),
                 [u](const Atom& a) { return std::abs(a.mark) > u; });
    return PointMeasure(std::move(kept));
}

PointMeasure build_time_space_measure(std::span<const double> series, double a_n) {
    if (!(a_n > 0.0)) {
        throw std::invalid_argument("build_time_space_measure: a_n must be positive");
    }
    if (series.empty()) {
        throw std::invalid_argument("build_time_space_measure: empty series");
    }
    const double n = static_cast<double>(series.size());
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i] != 0.0) {
            atoms.push_back({static_cast<double>(i + 1) / n, series[i] / a_n});
        }
    }
    return PointMeasure(std::move(atoms));
}

CadlagPath summation_functional(const PointMeasure& m, double u) {
    if (!(u > 0.0)) {
        throw std::invalid_argument("summation_functional: u must be positive");
    }
    // Stable sort keeps atom order within a shared time.
    std::vector<Atom> big;
    for (const Atom& a : m.atoms()) {
        if (std::abs(a.mark) > u) {
            big.push_back(a);
        }
    }
    std::stable_sort(big.begin(), big.end(), [](const Atom& a, const Atom& b) { return a.time < b.time; });
    double initial = 0.0;
    std::vector<double> times;
    std::vector<double> increments;
    for (const Atom& a : big) {
        if (a.time == 0.0) {
            initial += a.mark;
        } else {
            times.push_back(a.time);
            increments.push_back(a.mark);
        }
    }
    return CadlagPath::from_increments(initial, times, increments);
}

LambdaReport lambda_membership(const PointMeasure& m, double u) {
    if (!(u > 0.0)) {
        throw std::invalid_argument("lambda_membership: u must be positive");
    }
    LambdaReport report;
    std::map<double, std::pair<bool, bool>> signs_at;
    for (const Atom& a : m.atoms()) {
        const bool boundary = (a.time == 0.0 || a.time == 1.0) && std::abs(a.mark) > u;
        if (boundary || std::abs(a.mark) == u) {
            report.in_lambda1 = false;
            report.witnesses.push_back(a);
        }
        auto& s = signs_at[a.time];
        (a.mark > 0.0 ? s.first : s.second) = true;
    }
    for (const Atom& a : m.atoms()) {
        const auto& s = signs_at[a.time];
        if (s.first && s.second) {
            report.in_lambda2 = false;
            if (std::find(report.witnesses.begin(), report.witnesses.end(), a) == report.witnesses.end()) {
                report.witnesses.push_back(a);
            }
        }
    }
    return report;
}

PointMeasure read_measure_csv(std::istream& in) {
    const CsvTable table = read_csv(in);
    const std::size_t tc = table.column("time");
    const std::size_t mc = table.column("mark");
    std::vector<Atom> atoms;
    atoms.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        atoms.push_back({row[tc], row[mc]});
    }
    return PointMeasure(std::move(atoms));
}

void write_measure_csv(std::ostream& out, const PointMeasure& m) {
    out << "time,mark\n";
    out.precision(std::numeric_limits<double>::max_digits10);
    for (const Atom& a : m.atoms()) {
        out << a.time << ',' << a.mark << '\n';
    }
}

std::string measure_to_json(const PointMeasure& m) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Atom& a : m.atoms()) {
        arr.push_back({a.time, a.mark});
    }
    return arr.dump();
}

PointMeasure measure_from_json(const std::string& text) {
    const auto arr = nlohmann::json::parse(text);
    if (!arr.is_array()) {
        throw std::runtime_error("measure json: expected an array of [time, mark] pairs");
    }
    std::vector<Atom> atoms;
    for (const auto& pair : arr) {
        if (!pair.is_array() || pair.size() != 2) {
            throw std::runtime_error("measure json: expected [time, mark]");
        }
        atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    return PointMeasure(std::move(atoms));
}

}  // namespace rvlab
