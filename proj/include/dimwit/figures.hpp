#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dimwit/certify.hpp"
#include "dimwit/chart.hpp"

namespace dimwit::figures {

/// One plotted panel: min-entropy curves over the relative parameter p.
struct Panel {
    std::string id;  // file stem, e.g. "fig2_T2"
    std::string title;
    std::vector<chart::Series> series;
};

struct Options {
    std::vector<double> ps = certify::linspace(0.80, 1.0, 21);
    npa::Level level = npa::Level::OnePlusAB;
    int jobs = 1;
    int seesawRestarts = 20;
    std::uint64_t seed = 1;
    int deltaSteps = 21;
    std::vector<double> fixedDeltas = {0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<int> dims = {2, 3, 4, 5};
};

// Families plotted in figures 2 to 5.
const std::vector<std::string>& families();

// Figure 1: CGLMP witness under Theorem 1, one curve per dimension bound.
std::vector<Panel> figure1(const Options& opts);
// Figure 2: DI Bell bound, Theorem-1 bounds (direct and DI joint minus
// log2 d), Theorem-2 bounds of the reduced and full witnesses.
std::vector<Panel> figure2(const Options& opts);
// Figure 3: Theorem-2 lower bounds with see-saw upper bounds.
std::vector<Panel> figure3(const Options& opts);
// Figure 4: mixed strategy at fixed delta; where the delta cannot reach the
// witness value the curve shows one full bit.
std::vector<Panel> figure4(const Options& opts);
// Figure 5: mixed strategy with the adversary's best delta.
std::vector<Panel> figure5(const Options& opts);
std::vector<Panel> figure(int n, const Options& opts);

// Wide table: p, then one column per series.
void writeCsv(std::ostream& out, const Panel& p);
Panel readCsv(std::istream& in, const std::string& id);
void writeSvg(std::ostream& out, const Panel& p);
// <dir>/<id>.csv, <id>.dat (gnuplot, whitespace separated) and <id>.svg.
void writePanelFiles(const std::filesystem::path& dir, const Panel& p);

// Largest decrease between consecutive finite points of any series.
double worstDecrease(const Panel& p);

}  // namespace dimwit::figures
