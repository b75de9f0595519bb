#include "dimwit/scenario.hpp"

#include <cmath>
#include <string>

namespace dimwit {

namespace {

void requireFinite(const std::vector<double>& values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) fail(ErrorCode::Domain, std::string(what) + " contains a non-finite entry");
    }
}

}  // namespace

void DiScenario::validate() const {
    require(outcomesA >= 1 && outcomesB >= 1 && settingsX >= 1 && settingsY >= 1, ErrorCode::Shape,
            "Bell scenario counts must be positive");
}

void SdiScenario::validate() const {
    require(outcomes >= 1 && preparations >= 1 && settings >= 1, ErrorCode::Shape,
            "witness scenario counts must be positive");
    require(dim >= 2, ErrorCode::Domain, "dimension bound must be at least 2");
}

BellFunctional BellFunctional::zero(const DiScenario& scen, double constant) {
    scen.validate();
    return BellFunctional{scen, Tensor4({scen.outcomesA, scen.outcomesB, scen.settingsX, scen.settingsY}),
                          constant};
}

void BellFunctional::validate() const {
    scenario.validate();
    const Tensor4::Shape expected{scenario.outcomesA, scenario.outcomesB, scenario.settingsX,
                                  scenario.settingsY};
    require(coeff.shape() == expected, ErrorCode::Shape, "Bell coefficient tensor does not match scenario");
    requireFinite(coeff.data(), "Bell coefficient tensor");
    require(std::isfinite(constant), ErrorCode::Domain, "Bell constant is not finite");
}

BellFunctional operator+(const BellFunctional& lhs, const BellFunctional& rhs) {
    require(lhs.scenario == rhs.scenario, ErrorCode::Shape, "adding Bell functionals of different scenarios");
    BellFunctional out = lhs;
    for (std::size_t k = 0; k < out.coeff.size(); ++k) out.coeff.data()[k] += rhs.coeff.data()[k];
    out.constant += rhs.constant;
    return out;
}

BellFunctional operator*(double factor, const BellFunctional& f) {
    BellFunctional out = f;
    for (double& v : out.coeff.data()) v *= factor;
    out.constant *= factor;
    return out;
}

BellFunctional CorrelationBell::expand() const {
    BellFunctional f = BellFunctional::zero({2, 2, settingsX(), settingsY()}, constant);
    for (int x = 0; x < settingsX(); ++x) {
        for (int y = 0; y < settingsY(); ++y) {
            const double c = coeff(x, y);
            f.at(0, 0, x, y) = c;
            f.at(1, 1, x, y) = c;
            f.at(0, 1, x, y) = -c;
            f.at(1, 0, x, y) = -c;
        }
    }
    return f;
}

std::optional<CorrelationBell> CorrelationBell::extract(const BellFunctional& f) {
    if (!f.scenario.binary()) return std::nullopt;
    CorrelationBell out{Eigen::MatrixXd(f.scenario.settingsX, f.scenario.settingsY), f.constant};
    for (int x = 0; x < f.scenario.settingsX; ++x) {
        for (int y = 0; y < f.scenario.settingsY; ++y) {
            const double c = f.at(0, 0, x, y);
            if (f.at(1, 1, x, y) != c || f.at(0, 1, x, y) != -c || f.at(1, 0, x, y) != -c) return std::nullopt;
            out.coeff(x, y) = c;
        }
    }
    return out;
}

DimensionWitness DimensionWitness::zero(const SdiScenario& scen, double constant) {
    scen.validate();
    return DimensionWitness{scen, Tensor3({scen.outcomes, scen.preparations, scen.settings}), constant};
}

void DimensionWitness::validate() const {
    scenario.validate();
    const Tensor3::Shape expected{scenario.outcomes, scenario.preparations, scenario.settings};
    require(coeff.shape() == expected, ErrorCode::Shape, "witness coefficient tensor does not match scenario");
    requireFinite(coeff.data(), "witness coefficient tensor");
    require(std::isfinite(constant), ErrorCode::Domain, "witness constant is not finite");
}

bool DimensionWitness::zeroSumming(double tol) const {
    for (int b = 0; b < scenario.outcomes; ++b) {
        for (int y = 0; y < scenario.settings; ++y) {
            double sum = 0.0;
            for (int x = 0; x < scenario.preparations; ++x) sum += at(b, x, y);
            if (std::abs(sum) > tol) return false;
        }
    }
    return true;
}

bool DimensionWitness::outcomeAntisymmetric(double tol) const {
    if (!binary()) return false;
    for (int x = 0; x < scenario.preparations; ++x) {
        for (int y = 0; y < scenario.settings; ++y) {
            if (std::abs(at(0, x, y) + at(1, x, y)) > tol) return false;
        }
    }
    return true;
}

DimensionWitness operator+(const DimensionWitness& lhs, const DimensionWitness& rhs) {
    require(lhs.coeff.shape() == rhs.coeff.shape(), ErrorCode::Shape, "adding witnesses of different shapes");
    DimensionWitness out = lhs;
    for (std::size_t k = 0; k < out.coeff.size(); ++k) out.coeff.data()[k] += rhs.coeff.data()[k];
    out.constant += rhs.constant;
    return out;
}

DimensionWitness operator*(double factor, const DimensionWitness& w) {
    DimensionWitness out = w;
    for (double& v : out.coeff.data()) v *= factor;
    out.constant *= factor;
    return out;
}

DiDistribution::DiDistribution(const DiScenario& scen)
    : p({scen.outcomesA, scen.outcomesB, scen.settingsX, scen.settingsY}) {}

DiScenario DiDistribution::scenario() const { return {p.extent(0), p.extent(1), p.extent(2), p.extent(3)}; }

double DiDistribution::marginalA(int a, int x, int y) const {
    double sum = 0.0;
    for (int b = 0; b < p.extent(1); ++b) sum += p(a, b, x, y);
    return sum;
}

double DiDistribution::marginalB(int b, int x, int y) const {
    double sum = 0.0;
    for (int a = 0; a < p.extent(0); ++a) sum += p(a, b, x, y);
    return sum;
}

double DiDistribution::noSignalingViolation() const {
    const DiScenario s = scenario();
    double worst = 0.0;
    for (int x = 0; x < s.settingsX; ++x) {
        for (int a = 0; a < s.outcomesA; ++a) {
            for (int y = 1; y < s.settingsY; ++y)
                worst = std::max(worst, std::abs(marginalA(a, x, y) - marginalA(a, x, 0)));
        }
    }
    for (int y = 0; y < s.settingsY; ++y) {
        for (int b = 0; b < s.outcomesB; ++b) {
            for (int x = 1; x < s.settingsX; ++x)
                worst = std::max(worst, std::abs(marginalB(b, x, y) - marginalB(b, 0, y)));
        }
    }
    return worst;
}

void DiDistribution::validate(double tol, bool requireNoSignaling) const {
    const DiScenario s = scenario();
    for (double v : p.data()) {
        require(std::isfinite(v) && v >= -tol && v <= 1.0 + tol, ErrorCode::Domain,
                "probability entry outside [0,1]");
    }
    for (int x = 0; x < s.settingsX; ++x) {
        for (int y = 0; y < s.settingsY; ++y) {
            double sum = 0.0;
            for (int a = 0; a < s.outcomesA; ++a)
                for (int b = 0; b < s.outcomesB; ++b) sum += p(a, b, x, y);
            require(std::abs(sum - 1.0) <= tol, ErrorCode::Domain,
                    "distribution block (x=" + std::to_string(x) + ", y=" + std::to_string(y) +
                        ") is not normalised");
        }
    }
    if (requireNoSignaling)
        require(noSignalingViolation() <= tol, ErrorCode::Domain, "distribution violates no-signalling");
}

SdiDistribution::SdiDistribution(int outcomes, int preparations, int settings)
    : p({outcomes, preparations, settings}) {}

void SdiDistribution::validate(double tol) const {
    for (double v : p.data()) {
        require(std::isfinite(v) && v >= -tol && v <= 1.0 + tol, ErrorCode::Domain,
                "probability entry outside [0,1]");
    }
    for (int x = 0; x < preparations(); ++x) {
        for (int y = 0; y < settings(); ++y) {
            double sum = 0.0;
            for (int b = 0; b < outcomes(); ++b) sum += p(b, x, y);
            require(std::abs(sum - 1.0) <= tol, ErrorCode::Domain,
                    "distribution block (x=" + std::to_string(x) + ", y=" + std::to_string(y) +
                        ") is not normalised");
        }
    }
}

void SymmetryMap::validate() const {
    const int n = static_cast<int>(phi.size());
    std::vector<bool> hit(phi.size(), false);
    for (int x = 0; x < n; ++x) {
        const int img = phi[static_cast<std::size_t>(x)];
        require(img >= 0 && img < n, ErrorCode::Domain, "symmetry map image out of range");
        require(img != x, ErrorCode::Domain, "symmetry map has a fixed point");
        require(!hit[static_cast<std::size_t>(img)], ErrorCode::Domain, "symmetry map is not a bijection");
        hit[static_cast<std::size_t>(img)] = true;
    }
}

bool SymmetryMap::isHalf(const std::vector<int>& chi) const {
    std::vector<int> count(phi.size(), 0);
    for (int x : chi) {
        if (x < 0 || x >= static_cast<int>(phi.size())) return false;
        ++count[static_cast<std::size_t>(x)];
        ++count[static_cast<std::size_t>(phi[static_cast<std::size_t>(x)])];
    }
    for (int c : count)
        if (c != 1) return false;
    return true;
}

double evaluateBell(const BellFunctional& f, const DiDistribution& p) {
    require(f.coeff.shape() == p.p.shape(), ErrorCode::Shape, "Bell functional and distribution shapes differ");
    double value = f.constant;
    for (std::size_t k = 0; k < f.coeff.size(); ++k) value += f.coeff.data()[k] * p.p.data()[k];
    return value;
}

double evaluateWitness(const DimensionWitness& w, const SdiDistribution& p) {
    require(w.coeff.shape() == p.p.shape(), ErrorCode::Shape, "witness and distribution shapes differ");
    double value = w.constant;
    for (std::size_t k = 0; k < w.coeff.size(); ++k) value += w.coeff.data()[k] * p.p.data()[k];
    return value;
}

bool isSymmetric(const DimensionWitness& w, const SymmetryMap& phi, double tol) {
    require(w.binary(), ErrorCode::Precondition, "symmetry is defined for binary witnesses only");
    require(w.scenario.preparations % 2 == 0, ErrorCode::Precondition,
            "symmetric witnesses need an even number of preparations");
    require(static_cast<int>(phi.phi.size()) == w.scenario.preparations, ErrorCode::Shape,
            "symmetry map size does not match preparations");
    phi.validate();
    for (int b = 0; b < 2; ++b) {
        for (int x = 0; x < w.scenario.preparations; ++x) {
            for (int y = 0; y < w.scenario.settings; ++y) {
                const double v = w.at(b, x, y);
                if (std::abs(v + w.at(b, phi(x), y)) > tol) return false;
                if (std::abs(v + w.at(1 - b, x, y)) > tol) return false;
            }
        }
    }
    return true;
}

double minEntropy(double pGuess) {
    require(pGuess > 0.0 && pGuess <= 1.0, ErrorCode::Domain, "guessing probability must lie in (0,1]");
    return 0.0 - std::log2(pGuess);  // +0 rather than -0 at pGuess = 1
}

}  // namespace dimwit
