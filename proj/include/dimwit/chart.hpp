#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dimwit::chart {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;  // NaN entries break the line
};

struct Chart {
    std::string title;
    std::string xLabel;
    std::string yLabel;
    std::vector<Series> series;
    int width = 640;
    int height = 420;
};

// Minimal line chart: axes with rounded ticks, one polyline per series and a
// legend. Colours cycle through a fixed palette.
void writeSvg(std::ostream& out, const Chart& c);

// Rounded tick positions covering [lo, hi].
std::vector<double> niceTicks(double lo, double hi, int target = 6);

}  // namespace dimwit::chart
