#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dimwit/catalog.hpp"
#include "dimwit/certify.hpp"

using namespace dimwit;
using namespace dimwit::certify;

namespace {
const catalog::Entry& entry(const std::string& n) { return catalog::get(n); }

Options opts(Mode m, npa::Level lv = npa::Level::OnePlusAB) {
    Options o;
    o.mode = m;
    o.level = lv;
    return o;
}
}  // namespace

TEST_CASE("DI CHSH at the Tsirelson value") {
    const Result r = certifyDI(entry("CHSH").bell(), 2 * std::sqrt(2.0), opts(Mode::DI, npa::Level::Two));
    // Only the maximally entangled strategy reaches the face: P(a,b) = (1 + 1/sqrt2)/4.
    // The face margin moves s by ~4e-6, which moves the bound by O(sqrt) of that.
    const double oracle = (1 + 1 / std::sqrt(2.0)) / 4;
    CHECK(r.attainable);
    CHECK(r.perBranch.size() == 4);
    CHECK(r.pGuessBound >= oracle - 1e-7);
    CHECK(r.pGuessBound == doctest::Approx(oracle).epsilon(3e-3));
    CHECK(r.minEntropyBound == doctest::Approx(-std::log2(oracle)).epsilon(5e-3));
}

TEST_CASE("DI bounds at and below the classical value are trivial") {
    for (double s : {2.0, 0.0, -5.0}) {
        CAPTURE(s);
        const Result r = certifyDI(entry("CHSH").bell(), s, opts(Mode::DI));
        CHECK(r.attainable);
        CHECK(r.pGuessBound == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(r.minEntropyBound < 1e-6);
    }
}

TEST_CASE("values above the relaxation maximum are unattainable") {
    const Result r = certifyDI(entry("CHSH").bell(), 2.9, opts(Mode::DI));
    CHECK_FALSE(r.attainable);
    CHECK(r.pGuessBound == 1.0);
    CHECK(r.minEntropyBound == 0.0);
    CHECK(r.status() == "unattainable");
}

TEST_CASE("Theorem 2 on reduced T2 reproduces the experimental figures") {
    const auto& e = entry("T2-reduced");
    for (npa::Level lv : {npa::Level::OnePlusAB, npa::Level::Two}) {
        const Result r1 = certifyThm2(e.witness(), 0.974 * e.sMax->value, opts(Mode::Theorem2, lv));
        const Result r2 = certifyThm2(e.witness(), 0.984 * e.sMax->value, opts(Mode::Theorem2, lv));
        CHECK(std::abs(r1.minEntropyBound - 0.0595) < 0.01);
        CHECK(std::abs(r2.minEntropyBound - 0.082) < 0.01);
    }
}

TEST_CASE("branch b at x0 matches branch !b at phi(x0) for a symmetric witness") {
    const auto& e = entry("T2-full");
    const double s = 0.95 * e.sMax->value;
    for (int x0 = 0; x0 < 2; ++x0) {
        Options o = opts(Mode::Theorem2);
        o.x0 = x0;
        const Result r = certifyThm2(e.witness(), s, o);
        o.x0 = (*e.symmetry)(x0);
        const Result q = certifyThm2(e.witness(), s, o);
        REQUIRE(r.perBranch.size() == 2);
        REQUIRE(q.perBranch.size() == 2);
        CHECK(std::abs(r.perBranch[0].value - q.perBranch[1].value) < 1e-7);
        CHECK(std::abs(r.perBranch[1].value - q.perBranch[0].value) < 1e-7);
        CHECK(std::abs(r.pGuessBound - q.pGuessBound) < 1e-7);
    }
}

TEST_CASE("Theorem 2 rejects non-binary witnesses") {
    CHECK_THROWS_AS(certifyThm2(entry("CGLMP-witness").witness(), 0.0, opts(Mode::Theorem2)), Error);
    CHECK_THROWS_AS(certifyDI(entry("CHSH").bell(), 0.0, [] {
                        Options o = opts(Mode::DI);
                        o.x0 = 5;
                        return o;
                    }()),
                    Error);
}

TEST_CASE("mixed mode") {
    const auto& e = entry("T2-reduced");
    const double s = 0.95 * e.sMax->value;
    SUBCASE("single point grid equals Theorem 2") {
        const Result m = certifyMixed(e.witness(), s, opts(Mode::Mixed), {1.0});
        const Result t = certifyThm2(e.witness(), s, opts(Mode::Theorem2));
        CHECK(m.pGuessBound == doctest::Approx(t.pGuessBound).epsilon(1e-12));
        REQUIRE(m.bestDelta.has_value());
        CHECK(*m.bestDelta == 1.0);
    }
    SUBCASE("adversary prefers delta = 1") {
        Options o = opts(Mode::Mixed);
        o.refineDelta = false;
        const Result m = certifyMixed(e.witness(), s, o, uniformGrid(11));
        REQUIRE(m.bestDelta.has_value());
        CHECK(*m.bestDelta == 1.0);
        CHECK(m.deltaGrid.size() == 11);
        // Without the y0 column the witness cannot reach 0.95 of the maximum.
        CHECK_FALSE(m.deltaGrid.front().attainable);
    }
    SUBCASE("refinement adds three points") {
        const Result m = certifyMixed(e.witness(), s, opts(Mode::Mixed), uniformGrid(11));
        CHECK(m.deltaGrid.size() == 14);
        CHECK(*m.bestDelta >= 0.9);
    }
}

TEST_CASE("sweeps are monotone, deterministic and ordered by mode") {
    const auto& e = entry("T2-reduced");
    const std::vector<double> ps = linspace(0.85, 1.0, 31);
    Options o = opts(Mode::Theorem2);
    const Sweep a = sweep(e.payload, e.sMax->value, ps, o);
    o.jobs = 2;
    const Sweep b = sweep(e.payload, e.sMax->value, ps, o);
    Options o1 = opts(Mode::Theorem1);
    const Sweep t1 = sweep(e.payload, e.sMax->value, ps, o1);
    REQUIRE(a.points.size() == 31);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        CHECK(a.points[i].result.pGuessBound == b.points[i].result.pGuessBound);
        CHECK(a.points[i].result.pGuessBound >= 0.5 - 1e-7);
        CHECK(a.points[i].result.pGuessBound <= 1 + 1e-7);
        CHECK(a.points[i].result.pGuessBound <= t1.points[i].result.pGuessBound + 1e-6);
        if (i > 0) {
            CHECK(a.points[i].result.minEntropyBound >= a.points[i - 1].result.minEntropyBound - 1e-6);
            CHECK(t1.points[i].result.minEntropyBound >= t1.points[i - 1].result.minEntropyBound - 1e-6);
        }
    }
    REQUIRE(a.criticalP.has_value());
    const auto crit = criticalP(e.payload, e.sMax->value, 0.7, 1.0, opts(Mode::Theorem2));
    REQUIRE(crit.has_value());
    CHECK(*crit <= *a.criticalP);
    CHECK(*crit > 0.7);
}

TEST_CASE("Theorem 1 on the CGLMP witness") {
    const auto& e = entry("CGLMP-witness");
    double prev = 0.0;
    for (int d = 2; d <= 3; ++d) {
        Options o = opts(Mode::Theorem1);
        o.dim = d;
        const double smax = relaxationMaximum(e.payload, o);
        CHECK(smax > 0.0);
        const Result r = certifyThm1(e.witness(), smax, o);
        CHECK(r.attainable);
        CHECK(r.pGuessBound <= 1.0);
        CHECK(r.perBranch.size() == 3);
        REQUIRE(r.minEntropyMinusLog2d.has_value());
        // The joint presentation is never tighter than d * P(0,b).
        CHECK(*r.minEntropyMinusLog2d <= r.minEntropyBound + 1e-6);
        (void)prev;
    }
}

TEST_CASE("CSV and JSON rows") {
    const auto& e = entry("T2-reduced");
    const Sweep sw = sweep(e.payload, e.sMax->value, {0.95, 1.0}, opts(Mode::Mixed));
    std::ostringstream out;
    writeCsv(out, sw);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "p,s,mode,level,branch_values,p_guess,h_min,best_delta,status");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        CHECK(std::count(line.begin(), line.end(), ',') == 8);
        CHECK(line.find(",mixed,1+AB,") != std::string::npos);
    }
    CHECK(rows == 2);
    const auto j = toJson(sw);
    CHECK(j.at("points").size() == 2);
    CHECK(j.at("points")[0].contains("deltaGrid"));
    CHECK(j.at("points")[1].at("bestDelta") == 1.0);
}

TEST_CASE("value scaling keeps the constant") {
    CHECK(valueAtFraction(0.5, 4.0, 0.0) == 2.0);
    CHECK(valueAtFraction(0.5, 4.0, 2.0) == 3.0);
    CHECK(valueAtFraction(1.0, 4.0, 2.0) == 4.0);
    CHECK(parseMode("thm1") == Mode::Theorem1);
    CHECK_THROWS_AS(parseMode("bogus"), Error);
}
