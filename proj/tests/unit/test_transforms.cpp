#include <doctest.h>

#include <cmath>

#include "dimwit/catalog.hpp"
#include "dimwit/quantum.hpp"
#include "dimwit/transforms.hpp"
#include "test_util.hpp"

using namespace dimwit;
using testutil::maxDiff;

namespace {

CorrelationBell randomCorrelation(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n(1, 4), c(-3, 3);
    CorrelationBell cb{Eigen::MatrixXd(n(rng), n(rng)), static_cast<double>(c(rng))};
    for (int i = 0; i < cb.coeff.size(); ++i) cb.coeff.data()[i] = c(rng);
    return cb;
}

DimensionWitness antisymmetricWitness(int nx, int ny, std::mt19937_64& rng) {
    auto w = testutil::randomWitness(SdiScenario{2, nx, ny, 2}, rng);
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) w.at(1, x, y) = -w.at(0, x, y);
    return w;
}

// Preparations (a,x) -> a*|X| + x with rho_(1,x) = I - rho_(0,x).
QuantumRealization symmetricExtension(const QuantumRealization& r) {
    QuantumRealization full = r;
    for (const auto& rho : r.states) full.states.push_back(CMatrix::Identity(2, 2) - rho);
    return full;
}

}  // namespace

TEST_CASE("Bell to witness with uniform marginals reproduces the full T2 witness") {
    const auto& chsh = catalog::get("CHSH").bell();
    const auto lw = bellToWitness(chsh, uniformMarginals(chsh.scenario));
    CHECK(maxDiff(lw.witness, catalog::get("T2-full").witness()) == 0.0);
    REQUIRE(lw.labels.size() == 4);
    CHECK(lw.labels[3] == PreparationLabel{1, 1});
}

TEST_CASE("Bell to witness with concentrated marginals") {
    const auto& f = catalog::get("CGLMP").bell();
    Eigen::MatrixXd pA = Eigen::MatrixXd::Zero(3, 2);
    pA.row(0).setOnes();
    const auto lw = bellToWitness(f, pA, 3, LabelOrder::SettingMajor);
    for (std::size_t xb = 0; xb < lw.labels.size(); ++xb) {
        const auto [a, x] = lw.labels[xb];
        CHECK(lw.labels[xb] == PreparationLabel{static_cast<int>(xb) % 3, static_cast<int>(xb) / 3});
        for (int b = 0; b < 3; ++b)
            for (int y = 0; y < 2; ++y)
                CHECK(lw.witness.at(b, static_cast<int>(xb), y) == (a == 0 ? f.at(0, b, x, y) : 0.0));
    }
    Eigen::MatrixXd bad = pA;
    bad(1, 0) = 0.5;
    CHECK_THROWS_AS(bellToWitness(f, bad), Error);
}

TEST_CASE("Theorem-1 functional") {
    const auto zero = witnessToTheorem1Functional(DimensionWitness::zero(SdiScenario{2, 3, 2, 2}), 2);
    for (double v : zero.functional.coeff.data()) CHECK(v == 0.0);
    CHECK(zero.functional.constant == 0.0);
    CHECK(zero.marginal() == 0.5);

    for (int trial = 0; trial < 200; ++trial) {
        auto rng = testutil::trialRng(211, trial);
        const auto w = testutil::randomWitness(SdiScenario{2, 3, 2, 2}, rng);
        const auto r = randomQubitRealization(3, 2, rng, true, trial % 2 == 0);
        const auto f = witnessToTheorem1Functional(w, 2);
        CHECK(std::abs(evaluateBell(f.functional, liftToDevice1(r)) - evaluateWitness(w, probabilities(r))) < 1e-12);
    }
}

TEST_CASE("Theorem-2 functional") {
    CHECK(maxDiff(witnessToTheorem2Functional(catalog::get("BC3-reduced").witness()).functional,
                  catalog::get("BC3").bell()) == 0.0);
    CHECK(maxDiff(witnessToTheorem2Functional(catalog::get("T2-reduced").witness()).functional,
                  catalog::get("CHSH").bell()) == 0.0);

    for (int trial = 0; trial < 200; ++trial) {
        auto rng = testutil::trialRng(223, trial);
        const auto w = antisymmetricWitness(3, 3, rng);
        REQUIRE(theorem2Applicable(w));
        const auto r = randomQubitRealization(3, 3, rng, true, true);
        const auto f = witnessToTheorem2Functional(w);
        CHECK(std::abs(evaluateBell(f.functional, strategyPDistribution(r)) - evaluateWitness(w, probabilities(r))) <
              1e-12);
    }

    std::mt19937_64 rng(227);
    const auto generic = testutil::randomWitness(SdiScenario{2, 3, 2, 2}, rng);
    CHECK_FALSE(theorem2Applicable(generic));
    CHECK_THROWS_AS(witnessToTheorem2Functional(generic), Error);
    CHECK_THROWS_AS(witnessToTheorem2Functional(testutil::randomWitness(SdiScenario{3, 2, 2, 2}, rng)), Error);
}

TEST_CASE("delta scaling") {
    const auto& t2 = catalog::get("T2-reduced").witness();
    CHECK(deltaScale(t2, 0, 1.0) == t2);
    const auto z = deltaScale(t2, 1, 0.0);
    for (int b = 0; b < 2; ++b)
        for (int x = 0; x < 2; ++x) {
            CHECK(z.at(b, x, 1) == 0.0);
            CHECK(z.at(b, x, 0) == t2.at(b, x, 0));
        }
    const auto h = deltaScale(t2, 0, 0.5);
    for (int b = 0; b < 2; ++b)
        for (int x = 0; x < 2; ++x) CHECK(h.at(b, x, 0) == 0.5 * t2.at(b, x, 0));
    CHECK_THROWS_AS(deltaScale(t2, 0, 1.5), Error);
    CHECK_THROWS_AS(deltaScale(t2, 2, 0.5), Error);

    for (int trial = 0; trial < 100; ++trial) {
        auto rng = testutil::trialRng(229, trial);
        const auto w = testutil::randomWitness(SdiScenario{2, 3, 3, 2}, rng);
        const double d = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto mix = (1.0 - d) * deltaScale(w, 1, 0.0) + d * w;
        CHECK(maxDiff(deltaScale(w, 1, d), mix) < 1e-15);
    }
}

TEST_CASE("reduction round trips on random correlation inequalities") {
    for (int trial = 0; trial < 200; ++trial) {
        auto rng = testutil::trialRng(233, trial);
        const auto cb = randomCorrelation(rng);
        const auto forms = correlationToWitnessForms(cb);
        CHECK(isSymmetric(forms.full, forms.phi));
        const auto red = reduceSymmetric(forms.full, forms.phi, forms.half);
        CHECK(red.witness == forms.reduced);
        CHECK(witnessToTheorem2Functional(red.witness).functional == cb.expand());
    }
}

TEST_CASE("reduction against catalog families") {
    for (const char* family : {"T2", "BC3", "modCHSH"}) {
        CAPTURE(family);
        const std::string f = family;
        const auto& full = catalog::get(f + "-full");
        const auto red = reduceSymmetric(full.witness(), *full.symmetry, full.half);
        CHECK(red.witness == catalog::get(f + "-reduced").witness());
    }
    const auto& t3 = catalog::get("T3-full");
    CHECK(reduceSymmetric(t3.witness(), *t3.symmetry, t3.half).witness == catalog::get("T3-reduced").witness());
    CHECK_THROWS_AS(reduceSymmetric(t3.witness(), *t3.symmetry, {0, 7, 1, 2}), Error);
}

TEST_CASE("full and reduced witnesses agree on symmetric realizations") {
    for (int trial = 0; trial < 200; ++trial) {
        auto rng = testutil::trialRng(239, trial);
        const auto cb = randomCorrelation(rng);
        const auto forms = correlationToWitnessForms(cb);
        const int nx = cb.settingsX();
        const int ny = cb.settingsY();
        const auto r = randomQubitRealization(nx, ny, rng, trial % 2 == 0, true);
        const double full = evaluateWitness(forms.full, probabilities(symmetricExtension(r)));
        CHECK(std::abs(full - evaluateWitness(forms.reduced, probabilities(r))) < 1e-9);
    }
}

TEST_CASE("single-outcome form preserves values") {
    for (int trial = 0; trial < 100; ++trial) {
        auto rng = testutil::trialRng(241, trial);
        const auto w = antisymmetricWitness(3, 2, rng);
        const auto s = toSingleOutcomeForm(w);
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < 2; ++y) CHECK(s.at(1, x, y) == 0.0);
        const auto r = randomQubitRealization(3, 2, rng, false, false);
        const auto p = probabilities(r);
        CHECK(std::abs(evaluateWitness(s, p) - evaluateWitness(w, p)) < 1e-12);
    }
    // Printed "2(...) - 4" presentation of reduced BC3.
    const auto bc3 = toSingleOutcomeForm(catalog::get("BC3-reduced").witness());
    CHECK(bc3.constant == -4.0);
}

TEST_CASE("Alice outcome flip is an involution") {
    std::mt19937_64 rng(251);
    const auto f = testutil::randomBell(DiScenario{2, 2, 3, 2}, rng);
    const auto g = flipAliceOutcomes(f, {0, 2});
    CHECK(g.at(0, 1, 0, 1) == f.at(1, 1, 0, 1));
    CHECK(g.at(0, 1, 1, 1) == f.at(0, 1, 1, 1));
    CHECK(flipAliceOutcomes(g, {0, 2}) == f);
}
