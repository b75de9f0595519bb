#include <doctest.h>

#include <cmath>

#include "dimwit/catalog.hpp"
#include "dimwit/oracle.hpp"
#include "dimwit/seesaw.hpp"

using namespace dimwit;

TEST_CASE("classical bounds by enumeration") {
    const auto chsh = oracle::classicalBound(catalog::get("CHSH").bell());
    CHECK(chsh.value == 2.0);
    CHECK(chsh.strategies == 16);
    CHECK(chsh.maximizers == 8);
    const auto bc3 = oracle::classicalBound(catalog::get("BC3").bell());
    CHECK(bc3.value == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(bc3.strategies == 64);
    CHECK(oracle::classicalBound(catalog::get("modCHSH").bell()).value == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(oracle::classicalBound(catalog::get("T3").bell()).value == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("all-zero functional gives its constant") {
    const auto f = BellFunctional::zero(DiScenario{3, 2, 2, 3}, -1.25);
    const auto b = oracle::classicalBound(f);
    CHECK(b.value == -1.25);
    CHECK(b.maximizers == b.strategies);
}

TEST_CASE("chunked enumeration agrees across job counts") {
    const auto& f = catalog::get("CGLMP").bell();
    const auto a = oracle::classicalBound(f, 1);
    const auto b = oracle::classicalBound(f, 3);
    CHECK(a.value == b.value);
    CHECK(a.maximizers == b.maximizers);
}

TEST_CASE("classical witness bound matches the Bell bound on reduced forms") {
    // For +-form witnesses built from correlators, a classical bit reproduces
    // any deterministic local strategy and nothing more.
    CHECK(oracle::classicalWitnessBound(catalog::get("T2-reduced").witness()).value ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(oracle::classicalWitnessBound(catalog::get("BC3-reduced").witness()).value ==
          doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("constant decoders and outcomes exceed trace-one values on +-forms") {
    // A constant outcome on the setting whose column sums to 2 adds 2 with no
    // trade-off against the other setting.
    const auto w = catalog::get("T2-reduced").witness();
    CHECK(oracle::classicalWitnessBound(w, 1, false).value == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(oracle::gridWitnessMax(w, 5.0, 1, true).value == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(oracle::classicalWitnessBound(catalog::get("BC3-reduced").witness(), 1, false).value ==
          doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("enumeration budget is enforced") {
    const auto f = BellFunctional::zero(DiScenario{4, 4, 8, 8});
    CHECK_THROWS_AS(oracle::classicalBound(f), Error);
}

TEST_CASE("Fibonacci sphere points are unit and balanced") {
    const auto pts = oracle::fibonacciSphere(2000);
    Eigen::Vector3d sum = Eigen::Vector3d::Zero();
    for (const auto& p : pts) {
        CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-12));
        sum += p;
    }
    CHECK(sum.norm() / pts.size() < 1e-3);
    CHECK(oracle::pointsForResolution(1.0) == 41253);
}

TEST_CASE("grid maxima") {
    SUBCASE("single preparation and setting") {
        auto w = DimensionWitness::zero(SdiScenario{2, 1, 1, 2});
        w.at(0, 0, 0) = 1.0;
        CHECK(oracle::gridWitnessMax(w, 10.0).value == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("reduced T2 at one degree") {
        const double g = oracle::gridWitnessMax(catalog::get("T2-reduced").witness(), 1.0).value;
        CHECK(std::abs(g - 2 * std::sqrt(2.0)) < 2e-3);
    }
    SUBCASE("reduced T3 at three degrees") {
        const double g = oracle::gridWitnessMax(catalog::get("T3-reduced").witness(), 3.0, 2).value;
        CHECK(std::abs(g - 4 * std::sqrt(3.0)) < 2e-2);
    }
    SUBCASE("grid never beats the see-saw beyond its resolution") {
        for (const char* name : {"BC3-reduced", "modCHSH-reduced"}) {
            CAPTURE(name);
            const auto w = catalog::get(name).witness();
            const double g = oracle::gridWitnessMax(w, 3.0).value;
            seesaw::Options so;
            so.restarts = 20;
            const double s = seesaw::maximizeWitness(w, so).achievedWitness;
            CHECK(g <= s + 1e-9);
            CHECK(g >= s - 2e-2);
        }
    }
}

TEST_CASE("inclusion identities on random qubit realizations") {
    oracle::InclusionOptions o;
    o.samples = 10;
    o.seed = 11;
    const auto r = oracle::verifyInclusion(o);
    CHECK(r.liftIdentity < 1e-12);
    CHECK(r.liftMarginal < 1e-12);
    CHECK(r.theorem1Value < 1e-12);
    CHECK(r.negAnegB < 1e-10);
    CHECK(r.theorem2Value < 1e-10);
    CHECK(r.npaResidual < 1e-7);
    CHECK(r.npaResidualLift < 1e-7);
    const auto j = oracle::toJson(r);
    CHECK(j.at("residuals").contains("negAnegB"));
}
