#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dimwit/io.hpp"
#include "dimwit/npa.hpp"

namespace dimwit::certify {

enum class Mode { DI, Theorem1, Theorem2, Mixed };

Mode parseMode(const std::string& s);  // di | thm1 | thm2 | mixed
std::string modeName(Mode m);

struct Options {
    Mode mode = Mode::Theorem2;
    npa::Level level = npa::Level::OnePlusAB;
    int x0 = 0;
    int y0 = 0;
    int dim = 2;                  // Theorem-1 dimension bound
    int deltaSteps = 21;          // uniform grid on [0,1]
    bool refineDelta = true;      // golden-section around the grid argmax
    bool equality = false;        // witness = s instead of >= s
    double faceMargin = 1e-7;     // s is clamped to smax - faceMargin*(1+|smax|)
    int jobs = 1;
    sdp::Options solver{};
};

struct Branch {
    std::string label;  // "b=0", "a=1,b=0", ...
    double value = 0.0;
    sdp::Status status = sdp::Status::Optimal;
    double gap = 0.0;
    int iterations = 0;
};

struct DeltaPoint {
    double delta = 1.0;
    bool attainable = false;
    double witnessMax = 0.0;
    double pGuess = 1.0;    // Theorem-2 bound of the scaled witness
    double combined = 1.0;  // (1-delta) + delta*pGuess
    std::vector<Branch> branches;
};

struct Result {
    Mode mode = Mode::Theorem2;
    npa::Level level = npa::Level::OnePlusAB;
    double s = 0.0;
    double sEffective = 0.0;
    double witnessMax = 0.0;
    bool attainable = true;
    double pGuessBound = 1.0;
    double minEntropyBound = 0.0;
    // Theorem 1 only: DI joint bound on (a,b) minus log2 d.
    std::optional<double> minEntropyMinusLog2d;
    std::vector<Branch> perBranch;
    std::vector<DeltaPoint> deltaGrid;
    std::optional<double> bestDelta;
    std::vector<std::string> notes;

    std::string status() const;  // ok | clamped | unattainable | inaccurate
};

// Maximum of the mode's relaxation functional under the mode's constraints.
double relaxationMaximum(const Functional& target, const Options& opts);

Result certifyDI(const BellFunctional& f, double s, const Options& opts);
Result certifyThm1(const DimensionWitness& w, double s, const Options& opts);
Result certifyThm2(const DimensionWitness& w, double s, const Options& opts);
Result certifyMixed(const DimensionWitness& w, double s, const Options& opts,
                    const std::vector<double>& deltaGrid = {});
Result certify(const Functional& target, double s, const Options& opts);

std::vector<double> uniformGrid(int steps);

// s = C + p * (smax - C): the linear part scales, the constant is carried.
double valueAtFraction(double p, double sMax, double constant);

struct SweepPoint {
    double p = 0.0;
    Result result;
};

struct Sweep {
    std::vector<SweepPoint> points;
    std::optional<double> criticalP;  // first p with positive min-entropy
};

std::vector<double> linspace(double lo, double hi, int steps);
Sweep sweep(const Functional& target, double sMax, const std::vector<double>& ps, const Options& opts);
// Bisection on [pLo, pHi] for the smallest p with Hmin > threshold.
std::optional<double> criticalP(const Functional& target, double sMax, double pLo, double pHi, const Options& opts,
                                double tol = 1e-4, double threshold = 1e-6);

void writeCsvHeader(std::ostream& out);
void writeCsvRow(std::ostream& out, double p, const Result& r);
void writeCsv(std::ostream& out, const Sweep& sw);
nlohmann::json toJson(const Result& r);
nlohmann::json toJson(const Sweep& sw);

}  // namespace dimwit::certify
