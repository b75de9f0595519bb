#include "dimwit/chart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace dimwit::chart {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(6);
    s << (std::abs(v) < 1e-12 ? 0.0 : v);
    return s.str();
}

}  // namespace

std::vector<double> niceTicks(double lo, double hi, int target) {
    if (!(hi > lo)) return {lo};
    const double raw = (hi - lo) / std::max(1, target);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    std::vector<double> ticks;
    for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + step * 1e-9; t += step) ticks.push_back(t);
    return ticks;
}

void writeSvg(std::ostream& out, const Chart& c) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
    for (const Series& s : c.series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    if (!std::isfinite(xlo)) xlo = 0, xhi = 1, ylo = 0, yhi = 1;
    if (xhi - xlo < 1e-12) xlo -= 0.5, xhi += 0.5;
    if (yhi - ylo < 1e-12) ylo -= 0.5, yhi += 0.5;
    const double pad = 0.05 * (yhi - ylo);
    ylo -= pad;
    yhi += pad;

    const double left = 70, right = 170, top = 40, bottom = 55;
    const double pw = c.width - left - right, ph = c.height - top - bottom;
    auto sx = [&](double x) { return left + (x - xlo) / (xhi - xlo) * pw; };
    auto sy = [&](double y) { return top + (yhi - y) / (yhi - ylo) * ph; };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << c.width << "\" height=\"" << c.height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(c.title)
        << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : niceTicks(xlo, xhi)) {
        const double x = sx(t);
        out << "<line x1=\"" << x << "\" y1=\"" << top + ph << "\" x2=\"" << x << "\" y2=\"" << top + ph + 5
            << "\" stroke=\"black\"/><text x=\"" << x << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
            << fmt(t) << "</text>\n";
    }
    for (double t : niceTicks(ylo, yhi)) {
        const double y = sy(t);
        out << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left << "\" y2=\"" << y
            << "\" stroke=\"black\"/><line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\""
            << y << "\" stroke=\"#eeeeee\"/><text x=\"" << left - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << c.height - 12 << "\" text-anchor=\"middle\">"
        << escape(c.xLabel) << "</text>\n";
    out << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(c.yLabel) << "</text>\n";

    for (std::size_t k = 0; k < c.series.size(); ++k) {
        const Series& s = c.series[k];
        const char* colour = kPalette[k % std::size(kPalette)];
        std::string path;
        bool pen = false;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                pen = false;
                continue;
            }
            path += (pen ? " L" : " M") + fmt(sx(s.x[i])) + " " + fmt(sy(s.y[i]));
            pen = true;
        }
        if (!path.empty())
            out << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.8\"/>\n";
        const double ly = top + 14 + 18.0 * static_cast<double>(k);
        out << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 30 << "\" y2=\"" << ly
            << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/><text x=\"" << left + pw + 35 << "\" y=\""
            << ly + 4 << "\">" << escape(s.label) << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace dimwit::chart
