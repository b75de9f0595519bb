#include "dimwit/figures.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "dimwit/catalog.hpp"
#include "dimwit/parallel.hpp"
#include "dimwit/seesaw.hpp"

namespace dimwit::figures {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

certify::Options baseOptions(const Options& o, certify::Mode mode, const catalog::Entry& e) {
    certify::Options c;
    c.mode = mode;
    c.level = o.level;
    c.x0 = e.x0;
    c.y0 = e.y0;
    c.deltaSteps = o.deltaSteps;
    c.jobs = o.jobs;
    return c;
}

std::vector<double> column(const certify::Sweep& sw, double (*pick)(const certify::Result&)) {
    std::vector<double> v;
    for (const auto& pt : sw.points) v.push_back(pick(pt.result));
    return v;
}

double hMin(const certify::Result& r) { return r.minEntropyBound; }
double hMinusLog2d(const certify::Result& r) { return r.minEntropyMinusLog2d.value_or(kNaN); }

chart::Series witnessSeries(const std::string& label, const std::string& entry, certify::Mode mode,
                            const Options& o) {
    const auto& e = catalog::get(entry);
    const auto sw = certify::sweep(e.payload, e.sMax->value, o.ps, baseOptions(o, mode, e));
    return {label, o.ps, column(sw, hMin)};
}

// -log2 of the best see-saw guessing probability at the same witness values.
// The floor is clamped like the certification so p = 1 stays reachable.
chart::Series seesawSeries(const std::string& label, const std::string& entry, const Options& o) {
    const auto& e = catalog::get(entry);
    const auto& w = e.witness();
    const double sMax = e.sMax->value;
    seesaw::Options so;
    so.restarts = o.seesawRestarts;
    so.seed = o.seed;
    std::vector<double> y(o.ps.size(), kNaN);
    parallelFor(o.ps.size(), o.jobs, [&](std::size_t i) {
        const double s = certify::valueAtFraction(o.ps[i], sMax, w.constant);
        const double floor = std::min(s, sMax - 1e-7 * (1.0 + std::abs(sMax)));
        const auto pt = seesaw::maximizeGuessing(w, e.x0, e.y0, floor, so);
        if (pt.found) y[i] = minEntropy(pt.guessingProb);
    });
    return {label, o.ps, y};
}

}  // namespace

const std::vector<std::string>& families() {
    static const std::vector<std::string> names{"T2", "T3", "BC3", "modCHSH"};
    return names;
}

std::vector<Panel> figure1(const Options& o) {
    const auto& e = catalog::get("CGLMP-witness");
    Panel p{"fig1_CGLMP", "CGLMP witness, Theorem 1", {}};
    for (int d : o.dims) {
        auto c = baseOptions(o, certify::Mode::Theorem1, e);
        c.dim = d;
        const double sMax = certify::relaxationMaximum(e.payload, c);
        const auto sw = certify::sweep(e.payload, sMax, o.ps, c);
        p.series.push_back({"d=" + std::to_string(d), o.ps, column(sw, hMin)});
        p.series.push_back({"d=" + std::to_string(d) + " DI-log2d", o.ps, column(sw, hMinusLog2d)});
    }
    return {p};
}

std::vector<Panel> figure2(const Options& o) {
    std::vector<Panel> out;
    for (const auto& f : families()) {
        Panel p{"fig2_" + f, f + ": strategy P lower bounds", {}};
        const auto& bell = catalog::get(f);
        const auto c = baseOptions(o, certify::Mode::DI, bell);
        const auto sw = certify::sweep(bell.payload, certify::relaxationMaximum(bell.payload, c), o.ps, c);
        p.series.push_back({"DI Bell", o.ps, column(sw, hMin)});
        const auto& red = catalog::get(f + "-reduced");
        const auto t1 = certify::sweep(red.payload, red.sMax->value, o.ps,
                                       baseOptions(o, certify::Mode::Theorem1, red));
        p.series.push_back({"Thm1 reduced", o.ps, column(t1, hMin)});
        p.series.push_back({"Thm1 reduced DI-log2d", o.ps, column(t1, hMinusLog2d)});
        p.series.push_back(witnessSeries("Thm2 reduced", f + "-reduced", certify::Mode::Theorem2, o));
        p.series.push_back(witnessSeries("Thm2 full", f + "-full", certify::Mode::Theorem2, o));
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Panel> figure3(const Options& o) {
    std::vector<Panel> out;
    for (const auto& f : families()) {
        Panel p{"fig3_" + f, f + ": strategy P lower and upper bounds", {}};
        p.series.push_back(witnessSeries("SDP reduced", f + "-reduced", certify::Mode::Theorem2, o));
        p.series.push_back(witnessSeries("SDP full", f + "-full", certify::Mode::Theorem2, o));
        p.series.push_back(seesawSeries("see-saw reduced", f + "-reduced", o));
        p.series.push_back(seesawSeries("see-saw full", f + "-full", o));
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Panel> figure4(const Options& o) {
    std::vector<Panel> out;
    for (const auto& f : families()) {
        const auto& e = catalog::get(f + "-reduced");
        const auto& w = e.witness();
        auto c = baseOptions(o, certify::Mode::Mixed, e);
        c.refineDelta = false;
        c.jobs = 1;
        std::vector<std::vector<double>> h(o.fixedDeltas.size(), std::vector<double>(o.ps.size(), 0.0));
        parallelFor(o.ps.size(), o.jobs, [&](std::size_t i) {
            const double s = certify::valueAtFraction(o.ps[i], e.sMax->value, w.constant);
            const auto r = certify::certifyMixed(w, s, c, o.fixedDeltas);
            for (std::size_t k = 0; k < o.fixedDeltas.size(); ++k) {
                const auto& dp = r.deltaGrid.at(k);
                // An adversary who cannot reach s with this delta cannot mislead
                // us: the full bit of a binary outcome is plotted.
                h[k][i] = dp.attainable ? minEntropy(std::min(1.0, dp.combined)) : 1.0;
            }
        });
        Panel p{"fig4_" + f, f + ": mixed strategy at fixed delta", {}};
        for (std::size_t k = 0; k < o.fixedDeltas.size(); ++k) {
            std::ostringstream label;
            label << "delta=" << o.fixedDeltas[k];
            p.series.push_back({label.str(), o.ps, h[k]});
        }
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Panel> figure5(const Options& o) {
    std::vector<Panel> out;
    for (const auto& f : families()) {
        Panel p{"fig5_" + f, f + ": mixed strategy, optimal delta", {}};
        p.series.push_back(witnessSeries("reduced", f + "-reduced", certify::Mode::Mixed, o));
        p.series.push_back(witnessSeries("full", f + "-full", certify::Mode::Mixed, o));
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Panel> figure(int n, const Options& o) {
    switch (n) {
        case 1: return figure1(o);
        case 2: return figure2(o);
        case 3: return figure3(o);
        case 4: return figure4(o);
        case 5: return figure5(o);
        default: fail(ErrorCode::Domain, "figures are numbered 1 to 5");
    }
}

void writeCsv(std::ostream& out, const Panel& p) {
    std::ostringstream s;
    s.precision(12);
    s << "p";
    for (const auto& ser : p.series) s << ',' << ser.label;
    s << '\n';
    const std::size_t n = p.series.empty() ? 0 : p.series.front().x.size();
    for (std::size_t i = 0; i < n; ++i) {
        s << p.series.front().x[i];
        for (const auto& ser : p.series) {
            s << ',';
            if (std::isfinite(ser.y[i])) s << ser.y[i];
            else s << "nan";
        }
        s << '\n';
    }
    out << s.str();
}

Panel readCsv(std::istream& in, const std::string& id) {
    Panel p{id, id, {}};
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), ErrorCode::Parse, "empty panel CSV");
    {
        std::istringstream h(line);
        std::string cell;
        std::getline(h, cell, ',');
        require(cell == "p", ErrorCode::Parse, "panel CSV must start with a p column");
        while (std::getline(h, cell, ',')) p.series.push_back({cell, {}, {}});
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream r(line);
        std::string cell;
        std::getline(r, cell, ',');
        const double x = std::stod(cell);
        for (auto& ser : p.series) {
            require(static_cast<bool>(std::getline(r, cell, ',')), ErrorCode::Parse, "short row in panel CSV");
            ser.x.push_back(x);
            ser.y.push_back(cell == "nan" ? kNaN : std::stod(cell));
        }
    }
    return p;
}

void writeSvg(std::ostream& out, const Panel& p) {
    chart::Chart c;
    c.title = p.title;
    c.xLabel = "p";
    c.yLabel = "certified min-entropy (bits)";
    c.series = p.series;
    chart::writeSvg(out, c);
}

void writePanelFiles(const std::filesystem::path& dir, const Panel& p) {
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / (p.id + ".csv"));
        writeCsv(f, p);
    }
    {
        std::ofstream f(dir / (p.id + ".dat"));
        f.precision(12);
        f << "# p";
        for (const auto& s : p.series) f << " \"" << s.label << '"';
        f << '\n';
        const std::size_t n = p.series.empty() ? 0 : p.series.front().x.size();
        for (std::size_t i = 0; i < n; ++i) {
            f << p.series.front().x[i];
            for (const auto& s : p.series) f << ' ' << s.y[i];
            f << '\n';
        }
    }
    std::ofstream f(dir / (p.id + ".svg"));
    writeSvg(f, p);
}

double worstDecrease(const Panel& p) {
    double worst = 0.0;
    for (const auto& s : p.series) {
        double prev = kNaN;
        for (double v : s.y) {
            if (!std::isfinite(v)) continue;
            if (std::isfinite(prev)) worst = std::max(worst, prev - v);
            prev = v;
        }
    }
    return worst;
}

}  // namespace dimwit::figures
