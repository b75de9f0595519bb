#pragma once

#include <cstdint>

#include <nlohmann/json.hpp>

#include "dimwit/npa.hpp"
#include "dimwit/scenario.hpp"

namespace dimwit::oracle {

struct ClassicalBound {
    double value = 0.0;
    std::uint64_t maximizers = 0;  // deterministic strategies attaining value
    std::uint64_t strategies = 0;
};

inline constexpr std::uint64_t kMaxStrategies = 10'000'000;

// Enumerates a(x), b(y) lexicographically; Precondition above kMaxStrategies.
ClassicalBound classicalBound(const BellFunctional& f, int jobs = 1);

// Same enumeration over deterministic classical messages: each preparation
// sends one of d symbols, each setting applies a deterministic decoder.
// traceOne keeps decoders that give every outcome d/|B| symbols, the
// classical counterpart of trace-one measurements; constant decoders can
// exceed the qubit trace-one maximum of witnesses that are not zero-summing.
ClassicalBound classicalWitnessBound(const DimensionWitness& w, int jobs = 1, bool traceOne = true);

/// Points spread evenly on the unit sphere (golden-angle spiral).
std::vector<Eigen::Vector3d> fibonacciSphere(int n);
// Number of spiral points whose typical spacing is `degrees`.
int pointsForResolution(double degrees);

struct GridMax {
    double value = 0.0;
    std::uint64_t evaluations = 0;
    int spherePoints = 0;
};

inline constexpr std::uint64_t kMaxGridEvaluations = 200'000'000;

// Qubit maximum over trace-one projective measurements with axes on a grid
// (m_0 fixed to z, m_1 on a meridian, the rest on the sphere). Optimal pure
// states and outcome labels are solved exactly. constantOutcomes also lets
// each setting output a fixed outcome (rank 0 or 2 projectors).
GridMax gridWitnessMax(const DimensionWitness& w, double resolutionDegrees = 1.0, int jobs = 1,
                       bool constantOutcomes = false);

struct InclusionReport {
    int samples = 0;
    int preparations = 0;
    int settings = 0;
    npa::Level level = npa::Level::Two;
    double liftIdentity = 0.0;     // max |P(b|x,y) - d P(0,b|x,y)|
    double liftMarginal = 0.0;     // max |P(0|x) - 1/d|
    double theorem1Value = 0.0;    // max |I_thm1(lift) - W(P)|
    double negAnegB = 0.0;         // max |P(a,b|x,y) - P(!a,!b|x,y)|
    double theorem2Value = 0.0;    // max |I_thm2(strategy P) - W(P)|
    double npaResidual = 0.0;      // max feasibility residual of strategy-P tables
    double npaResidualLift = 0.0;  // same for the D1 lift
};

struct InclusionOptions {
    int samples = 100;
    std::uint64_t seed = 1;
    int preparations = 3;
    int settings = 2;
    npa::Level level = npa::Level::Two;
    bool checkNpa = true;
    int jobs = 1;
};

InclusionReport verifyInclusion(const InclusionOptions& opts = {});

nlohmann::json toJson(const ClassicalBound& b);
nlohmann::json toJson(const GridMax& g);
nlohmann::json toJson(const InclusionReport& r);

}  // namespace dimwit::oracle
