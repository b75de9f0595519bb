#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dimwit/tensor.hpp"

namespace dimwit {

/// Two-party Bell scenario: outcome and setting counts for Alice and Bob.
struct DiScenario {
    int outcomesA = 2;
    int outcomesB = 2;
    int settingsX = 2;
    int settingsY = 2;

    void validate() const;
    bool binary() const noexcept { return outcomesA == 2 && outcomesB == 2; }
    bool operator==(const DiScenario&) const = default;
};

/// Prepare-and-measure scenario with a bound `dim` on the message dimension.
struct SdiScenario {
    int outcomes = 2;
    int preparations = 2;
    int settings = 2;
    int dim = 2;

    void validate() const;
    bool binary() const noexcept { return outcomes == 2; }
    bool operator==(const SdiScenario&) const = default;
};

/// Linear functional sum alpha[a][b][x][y] P(a,b|x,y) + constant.
struct BellFunctional {
    DiScenario scenario;
    Tensor4 coeff;
    double constant = 0.0;

    static BellFunctional zero(const DiScenario& scen, double constant = 0.0);

    double& at(int a, int b, int x, int y) { return coeff(a, b, x, y); }
    double at(int a, int b, int x, int y) const { return coeff(a, b, x, y); }

    void validate() const;
    bool operator==(const BellFunctional&) const = default;
};

BellFunctional operator+(const BellFunctional& lhs, const BellFunctional& rhs);
BellFunctional operator*(double factor, const BellFunctional& f);

/// Correlator form sum alpha_hat[x][y] C(x,y) + constant over a binary scenario.
struct CorrelationBell {
    Eigen::MatrixXd coeff;  // [x][y]
    double constant = 0.0;

    int settingsX() const { return static_cast<int>(coeff.rows()); }
    int settingsY() const { return static_cast<int>(coeff.cols()); }

    BellFunctional expand() const;
    // Recovers the correlator form when the functional has the
    // alpha00 = alpha11 = -alpha01 = -alpha10 pattern; exact comparison.
    static std::optional<CorrelationBell> extract(const BellFunctional& f);
};

/// Linear functional sum beta[b][x][y] P(b|x,y) + constant.
struct DimensionWitness {
    SdiScenario scenario;
    Tensor3 coeff;
    double constant = 0.0;

    static DimensionWitness zero(const SdiScenario& scen, double constant = 0.0);

    double& at(int b, int x, int y) { return coeff(b, x, y); }
    double at(int b, int x, int y) const { return coeff(b, x, y); }

    void validate() const;
    bool binary() const noexcept { return scenario.binary(); }
    bool zeroSumming(double tol = 0.0) const;
    // beta[0][x][y] == -beta[1][x][y] for every x,y (binary witnesses only).
    bool outcomeAntisymmetric(double tol = 0.0) const;
    bool operator==(const DimensionWitness&) const = default;
};

DimensionWitness operator+(const DimensionWitness& lhs, const DimensionWitness& rhs);
DimensionWitness operator*(double factor, const DimensionWitness& w);

/// Joint table P(a,b|x,y).
struct DiDistribution {
    Tensor4 p;

    explicit DiDistribution(const DiScenario& scen);
    explicit DiDistribution(Tensor4 table) : p(std::move(table)) {}

    DiScenario scenario() const;
    double operator()(int a, int b, int x, int y) const { return p(a, b, x, y); }
    double& operator()(int a, int b, int x, int y) { return p(a, b, x, y); }

    double marginalA(int a, int x, int y = 0) const;
    double marginalB(int b, int x, int y) const;

    // Throws Domain when an entry leaves [0,1] or a (x,y) block is not
    // normalised within tol; optionally checks no-signalling as well.
    void validate(double tol = 1e-9, bool requireNoSignaling = false) const;
    double noSignalingViolation() const;
};

/// Table P(b|x,y).
struct SdiDistribution {
    Tensor3 p;

    SdiDistribution(int outcomes, int preparations, int settings);
    explicit SdiDistribution(Tensor3 table) : p(std::move(table)) {}

    int outcomes() const { return p.extent(0); }
    int preparations() const { return p.extent(1); }
    int settings() const { return p.extent(2); }

    double operator()(int b, int x, int y) const { return p(b, x, y); }
    double& operator()(int b, int x, int y) { return p(b, x, y); }

    void validate(double tol = 1e-9) const;
};

/// Fixed-point-free permutation of preparation labels.
struct SymmetryMap {
    std::vector<int> phi;

    void validate() const;
    int operator()(int x) const { return phi.at(static_cast<std::size_t>(x)); }
    // chi and phi(chi) partition the preparations.
    bool isHalf(const std::vector<int>& chi) const;
};

double evaluateBell(const BellFunctional& f, const DiDistribution& p);
double evaluateWitness(const DimensionWitness& w, const SdiDistribution& p);

// All three equalities beta[b][x][y] = -beta[b][phi(x)][y] = -beta[!b][x][y]
// within tol (exact by default).
bool isSymmetric(const DimensionWitness& w, const SymmetryMap& phi, double tol = 0.0);

double minEntropy(double pGuess);

}  // namespace dimwit
