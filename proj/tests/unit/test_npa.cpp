#include <doctest.h>

#include <chrono>
#include <cmath>

#include "dimwit/npa.hpp"

using namespace dimwit;
using namespace dimwit::npa;

namespace {
BellFunctional chsh() {
    Eigen::MatrixXd c(2, 2);
    c << 1, 1, 1, -1;
    return CorrelationBell{c, 0.0}.expand();
}
}  // namespace

TEST_CASE("CHSH relaxation sizes and Tsirelson value") {
    for (Level lv : {Level::One, Level::OnePlusAB, Level::Two, Level::Three}) {
        MomentProblem mp = buildMomentProblem({2, 2, 2, 2}, lv);
        setObjective(mp, chsh());
        auto t0 = std::chrono::steady_clock::now();
        const MomentSolution s = solve(mp, {1e-8, 200, 0});
        auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        MESSAGE("level " << levelName(lv) << " size " << mp.size() << " vars " << mp.numVars() << " value "
                         << s.value << " iters " << s.raw.iterations << " t " << dt);
        CHECK(s.status == sdp::Status::Optimal);
        CHECK(std::abs(s.value - 2 * std::sqrt(2.0)) < 1e-6);
    }
}

#include <random>

#include "dimwit/quantum.hpp"
#include "test_util.hpp"

TEST_CASE("moment matrix sizes") {
    CHECK(buildMomentProblem({2, 2, 2, 2}, Level::One).size() == 5);
    CHECK(buildMomentProblem({2, 2, 2, 2}, Level::OnePlusAB).size() == 9);
    CHECK(buildMomentProblem({2, 2, 6, 3}, Level::One).size() == 10);
    // 1 + (|A|-1)|X| + (|B|-1)|Y| for CGLMP-size scenarios.
    CHECK(buildMomentProblem({3, 3, 2, 2}, Level::One).size() == 9);
}

TEST_CASE("canonicalisation is confluent") {
    // Reducing a word directly or after canonicalising a random split gives
    // the same result.
    for (int trial = 0; trial < 2000; ++trial) {
        auto rng = testutil::trialRng(307, trial);
        std::uniform_int_distribution<int> len(1, 6), bit(0, 1), set(0, 2);
        Word w;
        for (int i = 0, n = len(rng); i < n; ++i)
            w.push_back(Symbol{bit(rng) ? Party::A : Party::B, set(rng), bit(rng)});
        const auto direct = canonicalize(w);
        const std::size_t cut = std::uniform_int_distribution<std::size_t>(0, w.size())(rng);
        const Word head(w.begin(), w.begin() + static_cast<long>(cut));
        const Word tail(w.begin() + static_cast<long>(cut), w.end());
        const auto h = canonicalize(head);
        const auto t = canonicalize(tail);
        if (!h || !t) {
            CHECK_FALSE(direct);
            continue;
        }
        Word joined = *h;
        joined.insert(joined.end(), t->begin(), t->end());
        const auto again = canonicalize(joined);
        CHECK(direct.has_value() == again.has_value());
        if (direct && again) CHECK(*direct == *again);
        if (direct) CHECK(canonicalize(*direct) == direct);
    }
}

TEST_CASE("adjoint of a canonical word") {
    const Word w{{Party::A, 0, 0}, {Party::A, 1, 0}, {Party::B, 0, 0}};
    const Word a = adjoint(w);
    CHECK(a == Word{{Party::A, 1, 0}, {Party::A, 0, 0}, {Party::B, 0, 0}});
    CHECK(adjoint(a) == w);
}

TEST_CASE("relaxations tighten with the level") {
    const BellFunctional f = [] {
        std::mt19937_64 rng(311);
        return testutil::randomBell({2, 2, 3, 2}, rng);
    }();
    double prev = INFINITY;
    for (Level lv : {Level::One, Level::OnePlusAB, Level::Two}) {
        MomentProblem mp = buildMomentProblem({2, 2, 3, 2}, lv);
        setObjective(mp, f);
        const auto s = solve(mp);
        REQUIRE(s.status == sdp::Status::Optimal);
        CHECK(s.value <= prev + 1e-6);
        prev = s.value;
    }
}

TEST_CASE("constraints never raise the optimum") {
    MomentProblem mp = buildMomentProblem({2, 2, 2, 2}, Level::Two);
    setGuessingObjective(mp, GuessMode::DI, 0, 0, 0, 0);
    const double free = solve(mp).value;
    CHECK(free == doctest::Approx(1.0).epsilon(1e-7));
    addWitnessValueConstraint(mp, chsh(), 2.5);
    const double bound = solve(mp).value;
    CHECK(bound <= free + 1e-7);
    CHECK(bound < 0.9);
    addSymmetryConstraints(mp);
    CHECK(solve(mp).value <= bound + 1e-7);
}

TEST_CASE("symmetry constraints keep Tsirelson and fix marginals") {
    MomentProblem mp = buildMomentProblem({2, 2, 2, 2}, Level::OnePlusAB);
    addSymmetryConstraints(mp);
    setObjective(mp, chsh());
    const auto s = solve(mp);
    CHECK(std::abs(s.value - 2 * std::sqrt(2.0)) < 1e-6);
    for (int x = 0; x < 2; ++x) CHECK(std::abs(mp.marginalA(0, x).evaluate(s.moments) - 0.5) < 1e-7);
}

TEST_CASE("Theorem-1 marginals") {
    // Level 1 does not force joint probabilities to be nonnegative, so the
    // guessing objective is checked from 1+AB up.
    MomentProblem mp = buildMomentProblem({2, 3, 2, 2}, Level::OnePlusAB);
    addTheorem1Marginals(mp, 2);
    const std::size_t n = mp.constraints.size();
    addTheorem1Marginals(mp, 2);
    CHECK(mp.constraints.size() == n);
    setGuessingObjective(mp, GuessMode::Theorem1, 0, 0, 0, 0, 2);
    const auto s = solve(mp);
    CHECK(s.value == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(mp.marginalA(0, 1).evaluate(s.moments) == doctest::Approx(0.5).epsilon(1e-7));

    MomentProblem five = buildMomentProblem({2, 3, 2, 2}, Level::OnePlusAB);
    addTheorem1Marginals(five, 5);
    setGuessingObjective(five, GuessMode::Theorem1, 0, 1, 1, 0, 5);
    const auto t = solve(five);
    CHECK(five.marginalA(0, 0).evaluate(t.moments) == doctest::Approx(0.2).epsilon(1e-7));
}

TEST_CASE("above-Tsirelson constraint is infeasible") {
    MomentProblem mp = buildMomentProblem({2, 2, 2, 2}, Level::OnePlusAB);
    addWitnessValueConstraint(mp, chsh(), 2.9);
    setGuessingObjective(mp, GuessMode::DI, 0, 0, 0, 0);
    CHECK_FALSE(solve(mp).optimal());
    // A -inf value is a no-op.
    MomentProblem free = buildMomentProblem({2, 2, 2, 2}, Level::One);
    const std::size_t n = free.constraints.size();
    addWitnessValueConstraint(free, chsh(), -std::numeric_limits<double>::infinity());
    CHECK(free.constraints.size() == n);
}

TEST_CASE("quantum devices are feasible at level 2") {
    double worstP = 0.0, worstL = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        auto rng = testutil::trialRng(313, trial);
        const auto r = randomQubitRealization(2, 2, rng, true, true);
        MomentProblem mpP = buildMomentProblem({2, 2, 2, 2}, Level::Two);
        addSymmetryConstraints(mpP);
        worstP = std::max(worstP, feasibilityResidual(mpP, strategyPDistribution(r)));
        MomentProblem mpL = buildMomentProblem({2, 2, 2, 2}, Level::Two);
        addTheorem1Marginals(mpL, 2);
        worstL = std::max(worstL, feasibilityResidual(mpL, liftToDevice1(r)));
    }
    CHECK(worstP < 1e-7);
    CHECK(worstL < 1e-7);
}

TEST_CASE("a PR box is not quantum") {
    DiDistribution pr(DiScenario{2, 2, 2, 2});
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) pr(a, b, x, y) = ((a ^ b) == (x & y)) ? 0.5 : 0.0;
    MomentProblem mp = buildMomentProblem({2, 2, 2, 2}, Level::One);
    CHECK(feasibilityResidual(mp, pr) > 1e-2);
}
