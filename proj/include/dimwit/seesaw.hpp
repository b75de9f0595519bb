#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dimwit/quantum.hpp"

namespace dimwit::seesaw {

/// Qubit strategy with pure states r_x and trace-one projective
/// measurements M^0_y = (I + m_y.sigma)/2, all unit Bloch vectors.
struct BlochStrategy {
    std::vector<Eigen::Vector3d> states;        // [x]
    std::vector<Eigen::Vector3d> measurements;  // [y]

    QuantumRealization realization() const;
};

struct StrategyPoint {
    bool found = false;  // false: no strategy met the floor within the budget
    BlochStrategy strategy;
    QuantumRealization realization;
    double achievedWitness = 0.0;
    double guessingProb = 0.0;  // max_b P(b|x0,y0)
    int bStar = 0;
    int restart = -1;  // index of the restart that produced the point
};

struct Options {
    int restarts = 50;
    std::uint64_t seed = 1;
    int maxRounds = 500;
    double tolerance = 1e-10;  // inner loop stops below this improvement
    int bisections = 40;       // Lagrange multiplier refinement steps
    int jobs = 1;
};

// W = K + sum_xy gamma(x,y) r_x.m_y on this strategy family.
struct BlochForm {
    double offset = 0.0;
    Eigen::MatrixXd gamma;  // [x][y]
};

BlochForm blochForm(const DimensionWitness& w);
double witnessValue(const BlochForm& f, const BlochStrategy& s);

StrategyPoint maximizeWitness(const DimensionWitness& w, const Options& opts = {});

// Best feasible P(b*|x0,y0) with witness >= sFloor over both b*.
StrategyPoint maximizeGuessing(const DimensionWitness& w, int x0, int y0, double sFloor, const Options& opts = {});

nlohmann::json toJson(const StrategyPoint& p);
StrategyPoint strategyFromJson(const nlohmann::json& j, const DimensionWitness& w, int x0 = 0, int y0 = 0);

}  // namespace dimwit::seesaw
