#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "dimwit/scenario.hpp"

namespace dimwit {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPsdTolerance = 1e-10;

/// Eigenpairs in descending eigenvalue order; each eigenvector is rotated so
/// its first non-negligible component is real and positive.
struct HermitianEigen {
    Eigen::VectorXd values;
    CMatrix vectors;
};

HermitianEigen hermitianEigen(const CMatrix& m);
bool isHermitian(const CMatrix& m, double tol = 1e-12);
bool isPsd(const CMatrix& m, double tol = kPsdTolerance);

// Qubit helpers: rho = (I + r.sigma)/2.
CMatrix pauli(int k);
CMatrix fromBloch(const Eigen::Vector3d& r);
Eigen::Vector3d blochVector(const CMatrix& rho);

/// States rho_x and POVMs {M^b_y} on a dim-dimensional Hilbert space.
struct QuantumRealization {
    int dim = 2;
    std::vector<CMatrix> states;              // [x]
    std::vector<std::vector<CMatrix>> povms;  // [y][b]

    int preparations() const { return static_cast<int>(states.size()); }
    int settings() const { return static_cast<int>(povms.size()); }
    int outcomes() const { return povms.empty() ? 0 : static_cast<int>(povms.front().size()); }

    // Throws InvalidRealization naming the offending state or POVM element.
    void validate() const;
    bool traceOneMeasurements(double tol = 1e-10) const;
    bool pureStates(double tol = 1e-9) const;
};

SdiDistribution probabilities(const QuantumRealization& r);

// M^0 + c I, M^1 - c I with c = (1 - Tr M^0)/2, for qubit binary POVMs.
QuantumRealization shiftToTraceOne(const QuantumRealization& r);
// rho -> I - rho (qubits only).
QuantumRealization negateStates(const QuantumRealization& r);
// Replaces each trace-one binary POVM by the projective pair from the
// eigenbasis of M^0, labelled to maximise that setting's witness contribution.
QuantumRealization projectiveRounding(const QuantumRealization& r, const DimensionWitness& w);

// Entanglement-assisted device: Alice projects onto the (pure) state rho_x,
// succeeding (a = 0) with probability 1/d.
DiDistribution liftToDevice1(const QuantumRealization& r);
// Same device where a failed projection prepares I - rho_x.
DiDistribution strategyPDistribution(const QuantumRealization& r);

// Random sampling. Haar pure states come from normalised complex Gaussians.
CVector randomPureVector(int dim, std::mt19937_64& rng);
CMatrix randomPureState(int dim, std::mt19937_64& rng);
CMatrix randomUnitary(int dim, std::mt19937_64& rng);
CMatrix randomMixedState(int dim, std::mt19937_64& rng);
// Qubit trace-one binary POVM: lambda |0_y><0_y| + (1 - lambda)|1_y><1_y| in
// a random basis, lambda uniform in [0,1].
std::vector<CMatrix> randomTraceOneBinaryPovm(std::mt19937_64& rng);
std::vector<CMatrix> randomPovm(int dim, int outcomes, std::mt19937_64& rng);

QuantumRealization randomQubitRealization(int preparations, int settings, std::mt19937_64& rng,
                                          bool pure = true, bool traceOne = true);

nlohmann::json toJson(const QuantumRealization& r);
QuantumRealization realizationFromJson(const nlohmann::json& j);

}  // namespace dimwit
