#pragma once

#include <vector>

#include <Eigen/Dense>

#include "dimwit/scenario.hpp"

namespace dimwit {

/// Preparation x_bar standing for the Bell-side pair (a, x).
struct PreparationLabel {
    int a = 0;
    int x = 0;
    bool operator==(const PreparationLabel&) const = default;
};

// OutcomeMajor: x_bar = a * |X| + x (correlation families).
// SettingMajor: x_bar = a + |A| * x (the CGLMP listing).
enum class LabelOrder { OutcomeMajor, SettingMajor };

struct LabelledWitness {
    DimensionWitness witness;
    std::vector<PreparationLabel> labels;  // [x_bar]
};

// Uniform P(a|x) = 1/|A| as an |A| x |X| table.
Eigen::MatrixXd uniformMarginals(const DiScenario& scen);

// beta[b][(a,x)][y] = alpha[a][b][x][y] * P(a|x); constant carried verbatim.
// pA is indexed [a][x]; columns must be probability vectors.
LabelledWitness bellToWitness(const BellFunctional& f, const Eigen::MatrixXd& pA, int dim = 2,
                              LabelOrder order = LabelOrder::OutcomeMajor);

/// Bell functional with alpha[0][b][x][y] = d * beta[b][x][y], alpha[1] = 0.
/// Its value on the lifted device equals the witness value; the guessing
/// objective is d * P(0,b|x0,y0) under the marginals P(0|x) = 1/d.
struct Theorem1Functional {
    BellFunctional functional;
    int dim = 2;
    double marginal() const { return 1.0 / dim; }
};

Theorem1Functional witnessToTheorem1Functional(const DimensionWitness& w, int d);

/// alpha[0][b] = beta[b], alpha[1][b] = beta[!b]; valid together with the
/// constraints P(a,b|x,y) = P(!a,!b|x,y). Guessing objective for outcome b
/// is P(0,b|x0,y0) + P(1,!b|x0,y0).
struct Theorem2Functional {
    BellFunctional functional;
};

// Requires a binary witness that is zero-summing or outcome-antisymmetric.
bool theorem2Applicable(const DimensionWitness& w, double tol = 1e-12);
Theorem2Functional witnessToTheorem2Functional(const DimensionWitness& w);

// Multiplies the y0 column by delta in [0,1].
DimensionWitness deltaScale(const DimensionWitness& w, int y0, double delta);

struct ReducedWitness {
    DimensionWitness witness;
    std::vector<int> source;  // reduced index -> original preparation
};

// Folds a symmetric witness onto the half chi: beta' = 2 beta restricted to chi.
ReducedWitness reduceSymmetric(const DimensionWitness& w, const SymmetryMap& phi, const std::vector<int>& half,
                               double tol = 0.0);

struct WitnessForms {
    DimensionWitness full;     // 2|X| preparations, x_bar = a * |X| + x
    DimensionWitness reduced;  // |X| preparations
    SymmetryMap phi;           // (a,x) -> (!a,x)
    std::vector<int> half;     // {(0,x)}
};

// Substitutes W'(x,y) (full) and P(0|x,y) - P(1|x,y) (reduced) for C(x,y).
WitnessForms correlationToWitnessForms(const CorrelationBell& bell, int dim = 2);

// For outcome-antisymmetric binary witnesses: beta0 -> 2 beta0, beta1 -> 0,
// constant -= sum beta0. Value-preserving on normalised tables.
DimensionWitness toSingleOutcomeForm(const DimensionWitness& w);

// Flips Alice's outcome labels on the listed settings.
BellFunctional flipAliceOutcomes(const BellFunctional& f, const std::vector<int>& settings);

}  // namespace dimwit
