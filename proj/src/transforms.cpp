#include "dimwit/transforms.hpp"

#include <cmath>
#include <string>

namespace dimwit {

Eigen::MatrixXd uniformMarginals(const DiScenario& scen) {
    return Eigen::MatrixXd::Constant(scen.outcomesA, scen.settingsX, 1.0 / scen.outcomesA);
}

LabelledWitness bellToWitness(const BellFunctional& f, const Eigen::MatrixXd& pA, int dim, LabelOrder order) {
    f.validate();
    const DiScenario& s = f.scenario;
    require(pA.rows() == s.outcomesA && pA.cols() == s.settingsX, ErrorCode::Shape,
            "P(a|x) table must be |A| x |X|");
    for (int x = 0; x < s.settingsX; ++x) {
        require(pA.col(x).minCoeff() >= 0.0, ErrorCode::Domain, "P(a|x) has a negative entry");
        require(std::abs(pA.col(x).sum() - 1.0) <= 1e-12, ErrorCode::Domain,
                "P(a|x) column " + std::to_string(x) + " is not normalised");
    }
    const int preps = s.outcomesA * s.settingsX;
    LabelledWitness out{DimensionWitness::zero({s.outcomesB, preps, s.settingsY, dim}, f.constant),
                        std::vector<PreparationLabel>(static_cast<std::size_t>(preps))};
    for (int a = 0; a < s.outcomesA; ++a) {
        for (int x = 0; x < s.settingsX; ++x) {
            const int xb = order == LabelOrder::OutcomeMajor ? a * s.settingsX + x : a + s.outcomesA * x;
            out.labels[static_cast<std::size_t>(xb)] = {a, x};
            for (int b = 0; b < s.outcomesB; ++b)
                for (int y = 0; y < s.settingsY; ++y) out.witness.at(b, xb, y) = f.at(a, b, x, y) * pA(a, x);
        }
    }
    return out;
}

Theorem1Functional witnessToTheorem1Functional(const DimensionWitness& w, int d) {
    w.validate();
    require(d >= 2, ErrorCode::Domain, "dimension must be at least 2");
    const SdiScenario& s = w.scenario;
    Theorem1Functional out{BellFunctional::zero({2, s.outcomes, s.preparations, s.settings}, w.constant), d};
    for (int b = 0; b < s.outcomes; ++b)
        for (int x = 0; x < s.preparations; ++x)
            for (int y = 0; y < s.settings; ++y) out.functional.at(0, b, x, y) = d * w.at(b, x, y);
    return out;
}

bool theorem2Applicable(const DimensionWitness& w, double tol) {
    return w.binary() && (w.zeroSumming(tol) || w.outcomeAntisymmetric(tol));
}

Theorem2Functional witnessToTheorem2Functional(const DimensionWitness& w) {
    w.validate();
    require(w.binary(), ErrorCode::Precondition, "Theorem-2 functional needs a binary witness");
    require(theorem2Applicable(w), ErrorCode::Precondition,
            "Theorem-2 functional needs a zero-summing or outcome-antisymmetric witness");
    const SdiScenario& s = w.scenario;
    Theorem2Functional out{BellFunctional::zero({2, 2, s.preparations, s.settings}, w.constant)};
    for (int b = 0; b < 2; ++b) {
        for (int x = 0; x < s.preparations; ++x) {
            for (int y = 0; y < s.settings; ++y) {
                out.functional.at(0, b, x, y) = w.at(b, x, y);
                out.functional.at(1, b, x, y) = w.at(1 - b, x, y);
            }
        }
    }
    return out;
}

DimensionWitness deltaScale(const DimensionWitness& w, int y0, double delta) {
    w.validate();
    require(delta >= 0.0 && delta <= 1.0, ErrorCode::Domain, "delta must lie in [0,1]");
    require(y0 >= 0 && y0 < w.scenario.settings, ErrorCode::Shape, "y0 out of range");
    DimensionWitness out = w;
    for (int b = 0; b < w.scenario.outcomes; ++b)
        for (int x = 0; x < w.scenario.preparations; ++x) out.at(b, x, y0) *= delta;
    return out;
}

ReducedWitness reduceSymmetric(const DimensionWitness& w, const SymmetryMap& phi, const std::vector<int>& half,
                               double tol) {
    w.validate();
    require(isSymmetric(w, phi, tol), ErrorCode::Precondition, "witness is not symmetric under the given map");
    require(phi.isHalf(half), ErrorCode::Domain, "preparation subset is not a half of the symmetry map");
    const SdiScenario& s = w.scenario;
    const int n = static_cast<int>(half.size());
    ReducedWitness out{DimensionWitness::zero({2, n, s.settings, s.dim}, w.constant), half};
    for (int k = 0; k < n; ++k)
        for (int b = 0; b < 2; ++b)
            for (int y = 0; y < s.settings; ++y)
                out.witness.at(b, k, y) = 2.0 * w.at(b, half[static_cast<std::size_t>(k)], y);
    return out;
}

WitnessForms correlationToWitnessForms(const CorrelationBell& bell, int dim) {
    const int nx = bell.settingsX();
    const int ny = bell.settingsY();
    WitnessForms out{DimensionWitness::zero({2, 2 * nx, ny, dim}, bell.constant),
                     DimensionWitness::zero({2, nx, ny, dim}, bell.constant), SymmetryMap{}, {}};
    for (int x = 0; x < nx; ++x) {
        out.phi.phi.push_back(x + nx);
        out.half.push_back(x);
    }
    for (int x = 0; x < nx; ++x) out.phi.phi.push_back(x);
    for (int x = 0; x < nx; ++x) {
        for (int y = 0; y < ny; ++y) {
            const double c = bell.coeff(x, y);
            out.full.at(0, x, y) = 0.5 * c;
            out.full.at(1, x, y) = -0.5 * c;
            out.full.at(0, nx + x, y) = -0.5 * c;
            out.full.at(1, nx + x, y) = 0.5 * c;
            out.reduced.at(0, x, y) = c;
            out.reduced.at(1, x, y) = -c;
        }
    }
    return out;
}

DimensionWitness toSingleOutcomeForm(const DimensionWitness& w) {
    require(w.outcomeAntisymmetric(), ErrorCode::Precondition,
            "single-outcome form needs an outcome-antisymmetric binary witness");
    DimensionWitness out = w;
    for (int x = 0; x < w.scenario.preparations; ++x) {
        for (int y = 0; y < w.scenario.settings; ++y) {
            out.at(0, x, y) = 2.0 * w.at(0, x, y);
            out.at(1, x, y) = 0.0;
            out.constant -= w.at(0, x, y);
        }
    }
    return out;
}

BellFunctional flipAliceOutcomes(const BellFunctional& f, const std::vector<int>& settings) {
    require(f.scenario.outcomesA == 2, ErrorCode::Precondition, "outcome flip needs binary Alice outcomes");
    BellFunctional out = f;
    for (int x : settings) {
        require(x >= 0 && x < f.scenario.settingsX, ErrorCode::Shape, "setting out of range");
        for (int b = 0; b < f.scenario.outcomesB; ++b) {
            for (int y = 0; y < f.scenario.settingsY; ++y) {
                out.at(0, b, x, y) = f.at(1, b, x, y);
                out.at(1, b, x, y) = f.at(0, b, x, y);
            }
        }
    }
    return out;
}

}  // namespace dimwit
