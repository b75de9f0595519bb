#include <doctest.h>

#include <cmath>

#include "dimwit/catalog.hpp"
#include "dimwit/quantum.hpp"
#include "test_util.hpp"

using namespace dimwit;

namespace {

const Complex I1{0.0, 1.0};

CMatrix ket(std::initializer_list<Complex> v) {
    CVector k(static_cast<Eigen::Index>(v.size()));
    int i = 0;
    for (Complex c : v) k(i++) = c;
    return k * k.adjoint();
}

double maxAbs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

QuantumRealization single(const CMatrix& rho, const CMatrix& m0) {
    QuantumRealization r;
    r.dim = static_cast<int>(rho.rows());
    r.states = {rho};
    r.povms = {{m0, CMatrix::Identity(r.dim, r.dim) - m0}};
    return r;
}

// beta1 column sums match beta0 column sums: the trace-one shift hypothesis.
DimensionWitness balancedWitness(int nx, int ny, std::mt19937_64& rng) {
    auto w = testutil::randomWitness(SdiScenario{2, nx, ny, 2}, rng);
    for (int y = 0; y < ny; ++y) {
        double d = 0.0;
        for (int x = 0; x < nx; ++x) d += w.at(0, x, y) - w.at(1, x, y);
        w.at(1, nx - 1, y) += d;
    }
    return w;
}

// sum of all coefficients zero and no constant: the negation hypothesis.
DimensionWitness zeroTotalWitness(int nx, int ny, std::mt19937_64& rng) {
    auto w = testutil::randomWitness(SdiScenario{2, nx, ny, 2}, rng);
    double s = 0.0;
    for (double v : w.coeff.data()) s += v;
    w.at(1, nx - 1, ny - 1) -= s;
    w.constant = 0.0;
    return w;
}

}  // namespace

TEST_CASE("probability examples") {
    const CMatrix z0 = ket({1, 0});
    const CMatrix plus = ket({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
    CHECK(probabilities(single(z0, z0))(0, 0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(probabilities(single(z0, plus))(0, 0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    std::mt19937_64 rng(1);
    for (int t = 0; t < 20; ++t) {
        const auto m = randomTraceOneBinaryPovm(rng);
        CHECK(probabilities(single(CMatrix::Identity(2, 2) / 2.0, m[0]))(0, 0, 0) ==
              doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("Bloch helpers") {
    const Eigen::Vector3d r(0.3, -0.4, 0.5);
    CHECK((blochVector(fromBloch(r)) - r).norm() < 1e-15);
    CHECK(maxAbs(pauli(0) * pauli(1) - I1 * pauli(2)) < 1e-15);
    CHECK(maxAbs(fromBloch(Eigen::Vector3d::UnitZ()) - ket({1, 0})) < 1e-15);
}

TEST_CASE("eigen decomposition ordering and phase") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        const CMatrix rho = randomMixedState(3, rng);
        const auto e = hermitianEigen(rho);
        for (int i = 0; i + 1 < e.values.size(); ++i) CHECK(e.values(i) >= e.values(i + 1));
        CHECK(maxAbs(e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint() - rho) < 1e-12);
        for (int k = 0; k < e.vectors.cols(); ++k) {
            int first = 0;
            while (std::abs(e.vectors(first, k)) < 1e-12) ++first;
            CHECK(std::abs(e.vectors(first, k).imag()) < 1e-12);
            CHECK(e.vectors(first, k).real() > 0.0);
        }
    }
}

TEST_CASE("realization validation names the problem") {
    auto r = single(ket({1, 0}), ket({1, 0}));
    CHECK_NOTHROW(r.validate());
    r.states[0] *= 1.5;
    CHECK_THROWS_AS(r.validate(), Error);
    r = single(ket({1, 0}), ket({1, 0}));
    r.povms[0][1] = CMatrix::Identity(2, 2);
    CHECK_THROWS_AS(r.validate(), Error);
}

TEST_CASE("trace-one shift examples") {
    CMatrix m0 = CMatrix::Zero(2, 2);
    m0(0, 0) = 1.0;
    m0(1, 1) = 0.4;
    const auto s = shiftToTraceOne(single(ket({1, 0}), m0));
    CHECK(std::abs(s.povms[0][0](0, 0) - 0.8) < 1e-15);
    CHECK(std::abs(s.povms[0][0](1, 1) - 0.2) < 1e-15);
    const CMatrix plus = ket({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)});
    CHECK(maxAbs(shiftToTraceOne(single(ket({1, 0}), plus)).povms[0][0] - plus) < 1e-15);
    const auto d = shiftToTraceOne(single(ket({1, 0}), CMatrix::Identity(2, 2)));
    CHECK(maxAbs(d.povms[0][0] - CMatrix::Identity(2, 2) / 2.0) < 1e-15);
}

TEST_CASE("state negation examples") {
    const auto n = negateStates(single(ket({1, 0}), ket({1, 0})));
    CHECK(maxAbs(n.states[0] - ket({0, 1})) < 1e-15);
    const auto m = negateStates(single(CMatrix::Identity(2, 2) / 2.0, ket({1, 0})));
    CHECK(maxAbs(m.states[0] - CMatrix::Identity(2, 2) / 2.0) < 1e-15);
    const Eigen::Vector3d r(0.1, 0.7, -0.2);
    CHECK((blochVector(negateStates(single(fromBloch(r), ket({1, 0}))).states[0]) + r).norm() < 1e-15);
}

TEST_CASE("trace-one shift preserves balanced witnesses") {
    for (int trial = 0; trial < 1000; ++trial) {
        auto rng = testutil::trialRng(101, trial);
        const auto w = balancedWitness(3, 2, rng);
        const auto r = randomQubitRealization(3, 2, rng, trial % 2 == 0, false);
        const double before = evaluateWitness(w, probabilities(r));
        const auto shifted = shiftToTraceOne(r);
        CHECK(shifted.traceOneMeasurements());
        CHECK(std::abs(evaluateWitness(w, probabilities(shifted)) - before) < 1e-9);
    }
}

TEST_CASE("state negation flips zero-total witnesses") {
    for (int trial = 0; trial < 1000; ++trial) {
        auto rng = testutil::trialRng(103, trial);
        const auto w = zeroTotalWitness(4, 3, rng);
        const auto r = randomQubitRealization(4, 3, rng, trial % 2 == 0, true);
        const double v = evaluateWitness(w, probabilities(r));
        CHECK(std::abs(evaluateWitness(w, probabilities(negateStates(r))) + v) < 1e-9);
    }
}

TEST_CASE("projective rounding never decreases the witness") {
    const auto& t2 = catalog::get("T2-reduced").witness();
    for (int trial = 0; trial < 1000; ++trial) {
        auto rng = testutil::trialRng(107, trial);
        const auto w = trial % 2 == 0 ? t2 : testutil::randomWitness(SdiScenario{2, 3, 2, 2}, rng);
        const auto r = randomQubitRealization(w.scenario.preparations, w.scenario.settings, rng, false, true);
        const auto rounded = projectiveRounding(r, w);
        CHECK(rounded.traceOneMeasurements());
        for (const auto& povm : rounded.povms) CHECK(maxAbs(povm[0] * povm[0] - povm[0]) < 1e-9);
        CHECK(evaluateWitness(w, probabilities(rounded)) >= evaluateWitness(w, probabilities(r)) - 1e-9);
    }
}

TEST_CASE("rounding a flat measurement picks the better labelling") {
    auto w = DimensionWitness::zero(SdiScenario{2, 1, 1, 2});
    w.at(0, 0, 0) = 1.0;
    w.at(1, 0, 0) = 3.0;
    auto r = single(ket({1, 0}), CMatrix::Identity(2, 2) / 2.0);
    // Both labellings of the eigenbasis are admissible; the value is the
    // larger of the two rank-one choices.
    const double rounded = evaluateWitness(w, probabilities(projectiveRounding(r, w)));
    CHECK(rounded >= 2.0 - 1e-12);
    CHECK(rounded <= 3.0 + 1e-12);
}

TEST_CASE("device lifts") {
    const auto r = single(ket({1, 0}), ket({1, 0}));
    const auto d1 = liftToDevice1(r);
    CHECK(std::abs(d1(0, 0, 0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(d1(1, 0, 0, 0)) < 1e-15);
    CHECK(std::abs(d1(0, 1, 0, 0)) < 1e-15);
    CHECK(std::abs(d1(1, 1, 0, 0) - 0.5) < 1e-15);
    const auto sp = strategyPDistribution(r);
    CHECK(std::abs(sp(0, 0, 0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(sp(1, 1, 0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(sp(0, 1, 0, 0)) < 1e-15);
    CHECK(std::abs(sp(1, 0, 0, 0)) < 1e-15);
}

TEST_CASE("lift identities on random realizations") {
    for (int trial = 0; trial < 1000; ++trial) {
        auto rng = testutil::trialRng(109, trial);
        const auto r = randomQubitRealization(3, 3, rng, true, trial % 2 == 0);
        const auto p = probabilities(r);
        const auto d1 = liftToDevice1(r);
        CHECK_NOTHROW(d1.validate(1e-12, true));
        double worst = 0.0;
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 3; ++y) {
                worst = std::max(worst, std::abs(d1.marginalA(0, x, y) - 0.5));
                for (int b = 0; b < 2; ++b) worst = std::max(worst, std::abs(p(b, x, y) - 2.0 * d1(0, b, x, y)));
            }
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("strategy-P chain on random trace-one realizations") {
    for (int trial = 0; trial < 1000; ++trial) {
        auto rng = testutil::trialRng(113, trial);
        const auto r = randomQubitRealization(3, 2, rng, true, true);
        const auto sp = strategyPDistribution(r);
        double worst = 0.0;
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 2; ++y)
                for (int a = 0; a < 2; ++a) {
                    const double pa = sp.marginalA(a, x, y);
                    worst = std::max(worst, std::abs(pa - 0.5));
                    for (int b = 0; b < 2; ++b) {
                        worst = std::max(worst, std::abs(sp(a, b, x, y) - sp(1 - a, 1 - b, x, y)));
                        const double cond = sp(a, b, x, y) / pa;
                        const double other = sp(1 - a, b, x, y) / sp.marginalA(1 - a, x, y);
                        const double flipped = sp(1 - a, 1 - b, x, y) / sp.marginalA(1 - a, x, y);
                        worst = std::max(worst, std::abs(cond + other - 1.0));
                        worst = std::max(worst, std::abs(cond - flipped));
                    }
                }
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("random samplers are valid and seeded") {
    std::mt19937_64 a(5), b(5);
    const auto ra = randomQubitRealization(3, 2, a, false, false);
    const auto rb = randomQubitRealization(3, 2, b, false, false);
    CHECK(maxAbs(ra.states[1] - rb.states[1]) == 0.0);
    CHECK_NOTHROW(ra.validate());
    std::mt19937_64 c(7);
    const CMatrix u = randomUnitary(4, c);
    CHECK(maxAbs(u * u.adjoint() - CMatrix::Identity(4, 4)) < 1e-12);
    const auto povm = randomPovm(3, 4, c);
    CMatrix sum = CMatrix::Zero(3, 3);
    for (const auto& m : povm) {
        CHECK(isPsd(m));
        sum += m;
    }
    CHECK(maxAbs(sum - CMatrix::Identity(3, 3)) < 1e-12);
}

TEST_CASE("realization JSON round trip") {
    std::mt19937_64 rng(9);
    const auto r = randomQubitRealization(2, 2, rng);
    const auto back = realizationFromJson(toJson(r));
    CHECK(back.dim == r.dim);
    for (int x = 0; x < 2; ++x) CHECK(maxAbs(back.states[x] - r.states[x]) < 1e-15);
    for (int y = 0; y < 2; ++y) CHECK(maxAbs(back.povms[y][0] - r.povms[y][0]) < 1e-15);
}
