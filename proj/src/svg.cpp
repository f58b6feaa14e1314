#include "rvlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace rvlab {

namespace {

constexpr double width = 640.0;
constexpr double height = 480.0;
constexpr double left = 70.0;
constexpr double right = 20.0;
constexpr double top = 40.0;
constexpr double bottom = 60.0;
const char* const palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Frame {
    double x0, x1, y0, y1;
    bool log_x, log_y;

    double px(double x) const {
        const double v = log_x ? std::log10(x) : x;
        return left + (v - x0) / (x1 - x0) * (width - left - right);
    }
    double py(double y) const {
        const double v = log_y ? std::log10(y) : y;
        return height - bottom - (v - y0) / (y1 - y0) * (height - top - bottom);
    }
};

void widen(double& lo, double& hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
}

std::string header(const std::string& title) {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
                    fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + fmt(width / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\">" + escape(title) + "</text>\n";
    return s;
}

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    std::string s;
    const double xb = height - bottom;
    s += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(xb) + "\" x2=\"" + fmt(width - right) + "\" y2=\"" + fmt(xb) +
         "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left) + "\" y2=\"" + fmt(xb) +
         "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double vx = f.x0 + (f.x1 - f.x0) * k / 4.0;
        const double vy = f.y0 + (f.y1 - f.y0) * k / 4.0;
        const double x = left + (width - left - right) * k / 4.0;
        const double y = xb - (height - top - bottom) * k / 4.0;
        s += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(xb + 18) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
             fmt_g(f.log_x ? std::pow(10.0, vx) : vx) + "</text>\n";
        s += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(y + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
             fmt_g(f.log_y ? std::pow(10.0, vy) : vy) + "</text>\n";
    }
    s += "<text x=\"" + fmt((left + width - right) / 2) + "\" y=\"" + fmt(height - 16) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(xlabel) + "</text>\n";
    s += "<text x=\"16\" y=\"" + fmt((top + xb) / 2) + "\" transform=\"rotate(-90 16 " + fmt((top + xb) / 2) +
         ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + escape(ylabel) + "</text>\n";
    return s;
}

}  // namespace

std::string survival_overlay_svg(const std::string& title, const std::vector<SurvivalCurve>& curves) {
    struct Pts {
        std::vector<double> x, p;
    };
    std::vector<Pts> pts;
    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double pmin = 1.0;
    for (const auto& c : curves) {
        std::vector<double> pos;
        for (double v : c.sample) {
            if (v > 0.0 && std::isfinite(v)) {
                pos.push_back(v);
            }
        }
        std::sort(pos.begin(), pos.end(), std::greater<>());
        Pts q;
        const double n = static_cast<double>(c.sample.size());
        // P(X > x) just below the k-th largest value is k / n.
        for (std::size_t k = 0; k < pos.size(); ++k) {
            q.x.push_back(pos[k]);
            q.p.push_back(static_cast<double>(k + 1) / n);
        }
        if (!pos.empty()) {
            xmin = std::min(xmin, pos.back());
            xmax = std::max(xmax, pos.front());
            pmin = std::min(pmin, q.p.front());
        }
        pts.push_back(std::move(q));
    }
    std::string s = header(title);
    if (!std::isfinite(xmin)) {
        s += "<text x=\"" + fmt(width / 2) + "\" y=\"" + fmt(height / 2) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">no positive values</text>\n";
        return s + "</svg>\n";
    }
    Frame f{std::log10(xmin), std::log10(xmax), std::log10(pmin), 0.0, true, true};
    widen(f.x0, f.x1);
    widen(f.y0, f.y1);
    s += axes(f, "x", "P(X > x)");
    for (std::size_t c = 0; c < pts.size(); ++c) {
        const char* colour = palette[c % 5];
        if (!pts[c].x.empty()) {
            s += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t k = 0; k < pts[c].x.size(); ++k) {
                s += (k ? " " : "") + fmt(f.px(pts[c].x[k])) + "," + fmt(f.py(pts[c].p[k]));
            }
            s += "\"/>\n";
        }
        const double ly = top + 14 + 16 * static_cast<double>(c);
        s += "<line x1=\"" + fmt(width - right - 150) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
             fmt(width - right - 130) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + colour +
             "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + fmt(width - right - 124) + "\" y=\"" + fmt(ly) +
             "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(curves[c].label) + "</text>\n";
    }
    return s + "</svg>\n";
}

std::string curve_svg(const std::string& title, const std::vector<double>& x, const std::vector<double>& y,
                      bool log_x) {
    if (x.size() != y.size()) {
        throw std::invalid_argument("curve_svg: x and y differ in length");
    }
    std::string s = header(title);
    if (x.empty()) {
        return s + "</svg>\n";
    }
    if (log_x && *std::min_element(x.begin(), x.end()) <= 0.0) {
        throw std::invalid_argument("curve_svg: log axis needs positive x");
    }
    auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
    Frame f{tx(*std::min_element(x.begin(), x.end())), tx(*std::max_element(x.begin(), x.end())),
            *std::min_element(y.begin(), y.end()), *std::max_element(y.begin(), y.end()), log_x, false};
    widen(f.x0, f.x1);
    widen(f.y0, f.y1);
    s += axes(f, "x", "value");
    s += "<polyline fill=\"none\" stroke=\"" + std::string(palette[0]) + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < x.size(); ++k) {
        s += (k ? " " : "") + fmt(f.px(x[k])) + "," + fmt(f.py(y[k]));
    }
    return s + "\"/>\n</svg>\n";
}

}  // namespace rvlab
