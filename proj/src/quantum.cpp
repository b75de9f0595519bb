#include "dimwit/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dimwit {

namespace {

void requireQubitBinary(const QuantumRealization& r, const char* op) {
    require(r.dim == 2, ErrorCode::Precondition, std::string(op) + " requires dimension 2");
    require(r.outcomes() == 2, ErrorCode::Precondition, std::string(op) + " requires binary measurements");
}

double traceReal(const CMatrix& a, const CMatrix& b) {
    // Re Tr(a b) without forming the product.
    double sum = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index k = 0; k < a.cols(); ++k) sum += (a(i, k) * b(k, i)).real();
    return sum;
}

CMatrix projector(const CVector& v) { return v * v.adjoint(); }

}  // namespace

HermitianEigen hermitianEigen(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
    require(solver.info() == Eigen::Success, ErrorCode::Solver, "Hermitian eigensolver failed");
    const Eigen::Index n = m.rows();
    HermitianEigen out{Eigen::VectorXd(n), CMatrix(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values(k) = solver.eigenvalues()(n - 1 - k);
        CVector v = solver.eigenvectors().col(n - 1 - k);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(v(i)) > 1e-12) {
                v *= std::conj(v(i)) / std::abs(v(i));
                break;
            }
        }
        out.vectors.col(k) = v;
    }
    return out;
}

bool isHermitian(const CMatrix& m, double tol) {
    return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool isPsd(const CMatrix& m, double tol) {
    if (!isHermitian(m, 1e-10)) return false;
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -tol;
}

CMatrix pauli(int k) {
    CMatrix s(2, 2);
    switch (k) {
        case 0: s << 0, 1, 1, 0; break;
        case 1: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 2: s << 1, 0, 0, -1; break;
        default: fail(ErrorCode::Domain, "Pauli index must be 0, 1 or 2");
    }
    return s;
}

CMatrix fromBloch(const Eigen::Vector3d& r) {
    CMatrix rho = CMatrix::Identity(2, 2);
    for (int k = 0; k < 3; ++k) rho += r(k) * pauli(k);
    return 0.5 * rho;
}

Eigen::Vector3d blochVector(const CMatrix& rho) {
    require(rho.rows() == 2 && rho.cols() == 2, ErrorCode::Shape, "Bloch vector needs a 2x2 matrix");
    Eigen::Vector3d r;
    for (int k = 0; k < 3; ++k) r(k) = traceReal(rho, pauli(k));
    return r;
}

void QuantumRealization::validate() const {
    require(dim >= 1, ErrorCode::InvalidRealization, "realization dimension must be positive");
    for (std::size_t x = 0; x < states.size(); ++x) {
        const CMatrix& rho = states[x];
        const std::string name = "state " + std::to_string(x);
        require(rho.rows() == dim && rho.cols() == dim, ErrorCode::InvalidRealization, name + " has wrong size");
        require(isHermitian(rho, 1e-12), ErrorCode::InvalidRealization, name + " is not Hermitian");
        require(isPsd(rho), ErrorCode::InvalidRealization, name + " is not positive semidefinite");
        require(std::abs(rho.trace().real() - 1.0) <= 1e-10, ErrorCode::InvalidRealization,
                name + " does not have unit trace");
    }
    const int nb = outcomes();
    for (std::size_t y = 0; y < povms.size(); ++y) {
        require(static_cast<int>(povms[y].size()) == nb, ErrorCode::InvalidRealization,
                "POVM " + std::to_string(y) + " has a different number of outcomes");
        CMatrix total = CMatrix::Zero(dim, dim);
        for (std::size_t b = 0; b < povms[y].size(); ++b) {
            const CMatrix& m = povms[y][b];
            const std::string name = "POVM element M^" + std::to_string(b) + "_" + std::to_string(y);
            require(m.rows() == dim && m.cols() == dim, ErrorCode::InvalidRealization, name + " has wrong size");
            require(isHermitian(m, 1e-12), ErrorCode::InvalidRealization, name + " is not Hermitian");
            require(isPsd(m), ErrorCode::InvalidRealization, name + " is not positive semidefinite");
            total += m;
        }
        require((total - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-10,
                ErrorCode::InvalidRealization, "POVM " + std::to_string(y) + " does not sum to identity");
    }
}

bool QuantumRealization::traceOneMeasurements(double tol) const {
    for (const auto& povm : povms)
        for (const CMatrix& m : povm)
            if (std::abs(m.trace().real() - 1.0) > tol) return false;
    return true;
}

bool QuantumRealization::pureStates(double tol) const {
    for (const CMatrix& rho : states) {
        const double purity = traceReal(rho, rho);
        if (std::abs(purity - 1.0) > tol) return false;
    }
    return true;
}

SdiDistribution probabilities(const QuantumRealization& r) {
    r.validate();
    SdiDistribution p(r.outcomes(), r.preparations(), r.settings());
    for (int x = 0; x < r.preparations(); ++x) {
        for (int y = 0; y < r.settings(); ++y) {
            for (int b = 0; b < r.outcomes(); ++b) {
                double v = traceReal(r.states[static_cast<std::size_t>(x)],
                                     r.povms[static_cast<std::size_t>(y)][static_cast<std::size_t>(b)]);
                if (v < 0.0 && v >= -kPsdTolerance) v = 0.0;
                p(b, x, y) = v;
            }
        }
    }
    return p;
}

QuantumRealization shiftToTraceOne(const QuantumRealization& r) {
    r.validate();
    requireQubitBinary(r, "trace-one shift");
    QuantumRealization out = r;
    const CMatrix id = CMatrix::Identity(2, 2);
    for (auto& povm : out.povms) {
        const double c = 0.5 * (1.0 - povm[0].trace().real());
        povm[0] += c * id;
        povm[1] -= c * id;
    }
    return out;
}

QuantumRealization negateStates(const QuantumRealization& r) {
    r.validate();
    require(r.dim == 2, ErrorCode::Precondition, "state negation requires dimension 2");
    QuantumRealization out = r;
    for (CMatrix& rho : out.states) rho = CMatrix::Identity(2, 2) - rho;
    return out;
}

QuantumRealization projectiveRounding(const QuantumRealization& r, const DimensionWitness& w) {
    r.validate();
    requireQubitBinary(r, "projective rounding");
    require(r.traceOneMeasurements(), ErrorCode::Precondition, "projective rounding requires trace-one POVMs");
    require(w.binary() && w.scenario.preparations == r.preparations() && w.scenario.settings == r.settings(),
            ErrorCode::Shape, "witness does not match realization");
    QuantumRealization out = r;
    for (int y = 0; y < r.settings(); ++y) {
        const HermitianEigen eig = hermitianEigen(r.povms[static_cast<std::size_t>(y)][0]);
        const CMatrix p0 = projector(eig.vectors.col(0));
        const CMatrix p1 = projector(eig.vectors.col(1));
        double keep = 0.0;
        double swap = 0.0;
        for (int x = 0; x < r.preparations(); ++x) {
            const CMatrix& rho = r.states[static_cast<std::size_t>(x)];
            const double t0 = traceReal(rho, p0);
            const double t1 = traceReal(rho, p1);
            keep += w.at(0, x, y) * t0 + w.at(1, x, y) * t1;
            swap += w.at(0, x, y) * t1 + w.at(1, x, y) * t0;
        }
        auto& povm = out.povms[static_cast<std::size_t>(y)];
        if (keep >= swap) {
            povm[0] = p0;
            povm[1] = p1;
        } else {
            povm[0] = p1;
            povm[1] = p0;
        }
    }
    return out;
}

DiDistribution liftToDevice1(const QuantumRealization& r) {
    r.validate();
    require(r.pureStates(), ErrorCode::Precondition, "device lift is defined for pure preparations only");
    const double d = r.dim;
    DiDistribution p(DiScenario{2, r.outcomes(), r.preparations(), r.settings()});
    const CMatrix id = CMatrix::Identity(r.dim, r.dim);
    for (int x = 0; x < r.preparations(); ++x) {
        const CMatrix& rho = r.states[static_cast<std::size_t>(x)];
        const CMatrix rest = (id - rho) / d;
        for (int y = 0; y < r.settings(); ++y) {
            for (int b = 0; b < r.outcomes(); ++b) {
                const CMatrix& m = r.povms[static_cast<std::size_t>(y)][static_cast<std::size_t>(b)];
                p(0, b, x, y) = std::max(0.0, traceReal(rho, m)) / d;
                p(1, b, x, y) = std::max(0.0, traceReal(rest, m));
            }
        }
    }
    return p;
}

DiDistribution strategyPDistribution(const QuantumRealization& r) {
    r.validate();
    requireQubitBinary(r, "strategy-P distribution");
    require(r.traceOneMeasurements(), ErrorCode::Precondition, "strategy P requires trace-one measurements");
    require(r.pureStates(), ErrorCode::Precondition, "strategy P device is defined for pure preparations");
    DiDistribution p(DiScenario{2, 2, r.preparations(), r.settings()});
    const CMatrix id = CMatrix::Identity(2, 2);
    for (int x = 0; x < r.preparations(); ++x) {
        const CMatrix& rho = r.states[static_cast<std::size_t>(x)];
        const CMatrix neg = id - rho;
        for (int y = 0; y < r.settings(); ++y) {
            for (int b = 0; b < 2; ++b) {
                const CMatrix& m = r.povms[static_cast<std::size_t>(y)][static_cast<std::size_t>(b)];
                p(0, b, x, y) = 0.5 * std::max(0.0, traceReal(rho, m));
                p(1, b, x, y) = 0.5 * std::max(0.0, traceReal(neg, m));
            }
        }
    }
    return p;
}

CVector randomPureVector(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector v(dim);
    for (int i = 0; i < dim; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        v(i) = Complex(re, im);
    }
    return v / v.norm();
}

CMatrix randomPureState(int dim, std::mt19937_64& rng) { return projector(randomPureVector(dim, rng)); }

CMatrix randomUnitary(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix rfac = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        const Complex d = rfac(i, i);
        if (std::abs(d) > 0.0) q.col(i) *= d / std::abs(d);
    }
    return q;
}

CMatrix randomMixedState(int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    CMatrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

std::vector<CMatrix> randomTraceOneBinaryPovm(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const CMatrix u = randomUnitary(2, rng);
    const double lambda = unit(rng);
    const CMatrix p0 = projector(u.col(0));
    const CMatrix p1 = projector(u.col(1));
    CMatrix m0 = lambda * p0 + (1.0 - lambda) * p1;
    m0 = 0.5 * (m0 + m0.adjoint());
    CMatrix m1 = CMatrix::Identity(2, 2) - m0;
    return {m0, m1};
}

std::vector<CMatrix> randomPovm(int dim, int outcomes, std::mt19937_64& rng) {
    // G_b = A_b A_b^dagger, then M_b = S^{-1/2} G_b S^{-1/2} with S = sum G_b.
    std::vector<CMatrix> g;
    CMatrix total = CMatrix::Zero(dim, dim);
    for (int b = 0; b < outcomes; ++b) {
        g.push_back(randomMixedState(dim, rng));
        total += g.back();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(total);
    const CMatrix invSqrt = solver.operatorInverseSqrt();
    std::vector<CMatrix> out;
    for (const CMatrix& gb : g) {
        CMatrix m = invSqrt * gb * invSqrt;
        out.push_back(0.5 * (m + m.adjoint()));
    }
    // Absorb rounding so the elements sum to the identity exactly enough.
    CMatrix sum = CMatrix::Zero(dim, dim);
    for (const CMatrix& m : out) sum += m;
    out.back() += CMatrix::Identity(dim, dim) - sum;
    return out;
}

QuantumRealization randomQubitRealization(int preparations, int settings, std::mt19937_64& rng, bool pure,
                                          bool traceOne) {
    QuantumRealization r;
    r.dim = 2;
    for (int x = 0; x < preparations; ++x) r.states.push_back(pure ? randomPureState(2, rng) : randomMixedState(2, rng));
    for (int y = 0; y < settings; ++y) r.povms.push_back(traceOne ? randomTraceOneBinaryPovm(rng) : randomPovm(2, 2, rng));
    return r;
}

namespace {

nlohmann::json matrixToJson(const CMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrixFromJson(const nlohmann::json& j, int dim) {
    require(j.is_array() && static_cast<int>(j.size()) == dim, ErrorCode::Parse, "matrix has wrong row count");
    CMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
        require(j[i].is_array() && static_cast<int>(j[i].size()) == dim, ErrorCode::Parse,
                "matrix has wrong column count");
        for (int k = 0; k < dim; ++k) m(i, k) = Complex(j[i][k].at(0).get<double>(), j[i][k].at(1).get<double>());
    }
    return m;
}

}  // namespace

nlohmann::json toJson(const QuantumRealization& r) {
    nlohmann::json states = nlohmann::json::array();
    for (const CMatrix& rho : r.states) states.push_back(matrixToJson(rho));
    nlohmann::json povms = nlohmann::json::array();
    for (const auto& povm : r.povms) {
        nlohmann::json elems = nlohmann::json::array();
        for (const CMatrix& m : povm) elems.push_back(matrixToJson(m));
        povms.push_back(std::move(elems));
    }
    return {{"dim", r.dim}, {"states", std::move(states)}, {"povms", std::move(povms)}};
}

QuantumRealization realizationFromJson(const nlohmann::json& j) {
    QuantumRealization r;
    r.dim = j.at("dim").get<int>();
    for (const auto& s : j.at("states")) r.states.push_back(matrixFromJson(s, r.dim));
    for (const auto& povm : j.at("povms")) {
        std::vector<CMatrix> elems;
        for (const auto& m : povm) elems.push_back(matrixFromJson(m, r.dim));
        r.povms.push_back(std::move(elems));
    }
    r.validate();
    return r;
}

}  // namespace dimwit
