#include "humsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "humsim/csv.hpp"

namespace humsim {

namespace {

constexpr double kWidth = 800, kHeight = 600;
constexpr double kLeft = 90, kRight = 30, kTop = 50, kBottom = 70;

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

// Roughly five ticks at 1, 2 or 5 times a power of ten.
double tick_step(double lo, double hi) {
    const double raw = (hi - lo) / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0})
        if (m * mag >= raw) return m * mag;
    return 10.0 * mag;
}

}  // namespace

void write_svg_chart(std::ostream& os, const std::vector<ChartSeries>& series, const std::string& title,
                     const std::string& x_label, const std::string& y_label) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (x1 <= x0) x1 = x0 + 1;
    if (y1 <= y0) {
        const double pad = std::max(std::abs(y0) * 0.05, 1e-12);
        y0 -= pad;
        y1 += pad;
    }

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    os << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-size=\"18\">" << escape(title) << "</text>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xs = tick_step(x0, x1);
    for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9 * xs; t += xs) {
        os << "<line x1=\"" << format_number(sx(t)) << "\" y1=\"" << kTop + ph << "\" x2=\"" << format_number(sx(t))
           << "\" y2=\"" << kTop + ph + 6 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << format_number(sx(t)) << "\" y=\"" << kTop + ph + 22
           << "\" text-anchor=\"middle\" font-size=\"12\">" << format_number(t) << "</text>\n";
    }
    const double ys = tick_step(y0, y1);
    for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9 * ys; t += ys) {
        os << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << format_number(sy(t)) << "\" x2=\"" << kLeft << "\" y2=\""
           << format_number(sy(t)) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << kLeft - 10 << "\" y=\"" << format_number(sy(t) + 4)
           << "\" text-anchor=\"end\" font-size=\"12\">" << format_number(t) << "</text>\n";
    }
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 20 << "\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(x_label) << "</text>\n";
    os << "<text x=\"20\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
       << kTop + ph / 2 << ")\">" << escape(y_label) << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        os << "<polyline fill=\"none\" stroke-width=\"2\" stroke=\"" << escape(s.color) << "\" points=\"";
        for (std::size_t k = 0; k < s.points.size(); ++k)
            os << (k ? " " : "") << format_number(sx(s.points[k].first)) << ',' << format_number(sy(s.points[k].second));
        os << "\"/>\n";
        const double ly = kTop + 20 + 20 * static_cast<double>(i);
        os << "<line x1=\"" << kLeft + 15 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + 45 << "\" y2=\"" << ly
           << "\" stroke-width=\"2\" stroke=\"" << escape(s.color) << "\"/>\n";
        os << "<text x=\"" << kLeft + 52 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << escape(s.label)
           << "</text>\n";
    }
    os << "</svg>\n";
}

}  // namespace humsim
