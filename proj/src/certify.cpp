#include "dimwit/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "dimwit/parallel.hpp"
#include "dimwit/transforms.hpp"

namespace dimwit::certify {

namespace {

constexpr double kAttainTol = 1e-7;
constexpr double kInaccurateTol = 1e-5;
constexpr double kMaximumTolerance = 1e-10;
constexpr double kDeltaTie = 1e-7;

struct Setup {
    npa::MomentProblem mp;
    BellFunctional functional;
    npa::GuessMode guess = npa::GuessMode::DI;
    int dim = 2;
    std::vector<std::pair<int, int>> branches;  // (a, b)
};

std::string branchLabel(npa::GuessMode g, int a, int b) {
    if (g == npa::GuessMode::DI) return "a=" + std::to_string(a) + ",b=" + std::to_string(b);
    return "b=" + std::to_string(b);
}

void checkTarget(const DiScenario& s, const Options& opts) {
    require(opts.x0 >= 0 && opts.x0 < s.settingsX, ErrorCode::Domain, "x0 out of range");
    require(opts.y0 >= 0 && opts.y0 < s.settingsY, ErrorCode::Domain, "y0 out of range");
}

Setup setupDI(const BellFunctional& f, const Options& opts) {
    f.validate();
    checkTarget(f.scenario, opts);
    Setup st{npa::buildMomentProblem(f.scenario, opts.level), f, npa::GuessMode::DI, 1, {}};
    for (int a = 0; a < f.scenario.outcomesA; ++a)
        for (int b = 0; b < f.scenario.outcomesB; ++b) st.branches.emplace_back(a, b);
    return st;
}

Setup setupThm1(const DimensionWitness& w, const Options& opts) {
    w.validate();
    require(opts.dim >= 2, ErrorCode::Domain, "dimension bound must be at least 2");
    const Theorem1Functional t1 = witnessToTheorem1Functional(w, opts.dim);
    checkTarget(t1.functional.scenario, opts);
    Setup st{npa::buildMomentProblem(t1.functional.scenario, opts.level), t1.functional, npa::GuessMode::Theorem1,
             opts.dim, {}};
    npa::addTheorem1Marginals(st.mp, opts.dim);
    for (int b = 0; b < w.scenario.outcomes; ++b) st.branches.emplace_back(0, b);
    return st;
}

Setup setupThm2(const DimensionWitness& w, const Options& opts) {
    w.validate();
    require(theorem2Applicable(w), ErrorCode::Precondition,
            "Theorem-2 certification needs a binary zero-summing or outcome-antisymmetric witness");
    const Theorem2Functional t2 = witnessToTheorem2Functional(w);
    checkTarget(t2.functional.scenario, opts);
    Setup st{npa::buildMomentProblem(t2.functional.scenario, opts.level), t2.functional, npa::GuessMode::Theorem2, 2,
             {}};
    npa::addSymmetryConstraints(st.mp);
    st.branches = {{0, 0}, {0, 1}};
    return st;
}

bool acceptable(const npa::MomentSolution& s) {
    if (s.status == sdp::Status::Optimal) return true;
    if (s.status != sdp::Status::SlowProgress && s.status != sdp::Status::IterLimit) return false;
    return s.raw.relativeGap < kInaccurateTol && s.raw.primalResidual < kInaccurateTol &&
           s.raw.dualResidual < kInaccurateTol;
}

double maximum(const Setup& st, const Options& opts) {
    npa::MomentProblem mp = st.mp;
    npa::setObjective(mp, st.functional);
    // The face clamp sits a relative 1e-7 below this value and the guessing
    // bound grows like the square root of the distance, so an overshoot at
    // the default tolerance would move the clamped bound by ~1e-5.
    sdp::Options tight = opts.solver;
    tight.tolerance = std::min(tight.tolerance, kMaximumTolerance);
    const npa::MomentSolution sol = npa::solve(mp, tight);
    require(acceptable(sol), ErrorCode::Solver,
            "relaxation maximum: solver returned " + sdp::statusName(sol.status));
    return sol.value;
}

Result run(const Setup& st, Mode mode, double s, const Options& opts) {
    Result r;
    r.mode = mode;
    r.level = opts.level;
    r.s = s;
    r.witnessMax = maximum(st, opts);
    const double scale = 1.0 + std::abs(r.witnessMax);
    if (s > r.witnessMax + kAttainTol * scale) {
        r.attainable = false;
        r.sEffective = s;
        r.notes.push_back("s exceeds the relaxation maximum " + std::to_string(r.witnessMax) + "; no strategy attains it");
        return r;
    }
    const double face = r.witnessMax - opts.faceMargin * scale;
    r.sEffective = std::min(s, face);
    if (r.sEffective < s) r.notes.push_back("s clamped to the relaxation maximum minus the face margin");

    npa::MomentProblem mp = st.mp;
    npa::addWitnessValueConstraint(mp, st.functional, r.sEffective,
                                   opts.equality ? npa::Relation::Equal : npa::Relation::GreaterEqual);
    double best = 0.0;
    for (const auto& [a, b] : st.branches) {
        npa::setGuessingObjective(mp, st.guess, a, b, opts.x0, opts.y0, st.dim);
        const npa::MomentSolution sol = npa::solve(mp, opts.solver);
        const std::string label = branchLabel(st.guess, a, b);
        if (sol.status == sdp::Status::DualInfeasible || sol.status == sdp::Status::PrimalInfeasible) {
            r.perBranch.push_back({label, std::nan(""), sol.status, sol.raw.relativeGap, sol.raw.iterations});
            r.attainable = false;
            r.notes.push_back("branch " + label + ": witness constraint infeasible");
            continue;
        }
        if (!acceptable(sol))
            fail(ErrorCode::Solver, "branch " + label + " at s=" + std::to_string(r.sEffective) + ": solver returned " +
                                        sdp::statusName(sol.status) + " (gap " + std::to_string(sol.raw.relativeGap) +
                                        ", primal residual " + std::to_string(sol.raw.primalResidual) +
                                        ", dual residual " + std::to_string(sol.raw.dualResidual) + ")");
        if (sol.status != sdp::Status::Optimal) r.notes.push_back("branch " + label + ": inaccurate solve accepted");
        r.perBranch.push_back({label, sol.value, sol.status, sol.raw.relativeGap, sol.raw.iterations});
        best = std::max(best, sol.value);
    }
    if (!r.attainable) {
        r.pGuessBound = 1.0;
        r.minEntropyBound = 0.0;
        return r;
    }
    if (best > 1.0) {
        if (best > 1.0 + kAttainTol) r.notes.push_back("guessing bound above 1 clamped");
        best = 1.0;
    }
    r.pGuessBound = std::max(best, std::numeric_limits<double>::min());
    r.minEntropyBound = std::max(0.0, minEntropy(r.pGuessBound));
    return r;
}

double deltaCombined(const DeltaPoint& d) {
    return d.attainable ? d.combined : -std::numeric_limits<double>::infinity();
}

DeltaPoint deltaPoint(const DimensionWitness& w, double s, double delta, const Options& opts) {
    const Result r = certifyThm2(deltaScale(w, opts.y0, delta), s, opts);
    DeltaPoint p;
    p.delta = delta;
    p.attainable = r.attainable;
    p.witnessMax = r.witnessMax;
    p.pGuess = r.pGuessBound;
    p.combined = r.attainable ? (1.0 - delta) + delta * r.pGuessBound : 1.0;
    p.branches = r.perBranch;
    return p;
}

// Better combined value wins; near-ties go to the larger delta.
bool betterDelta(const DeltaPoint& c, const DeltaPoint& best) {
    const double vc = deltaCombined(c);
    const double vb = deltaCombined(best);
    if (!c.attainable) return false;
    if (!best.attainable) return true;
    if (vc > vb + kDeltaTie) return true;
    return std::abs(vc - vb) <= kDeltaTie && c.delta > best.delta;
}

}  // namespace

Mode parseMode(const std::string& s) {
    if (s == "di" || s == "DI") return Mode::DI;
    if (s == "thm1") return Mode::Theorem1;
    if (s == "thm2") return Mode::Theorem2;
    if (s == "mixed") return Mode::Mixed;
    fail(ErrorCode::Parse, "unknown mode '" + s + "' (expected di, thm1, thm2 or mixed)");
}

std::string modeName(Mode m) {
    switch (m) {
        case Mode::DI: return "di";
        case Mode::Theorem1: return "thm1";
        case Mode::Theorem2: return "thm2";
        case Mode::Mixed: return "mixed";
    }
    return "?";
}

std::string Result::status() const {
    if (!attainable) return "unattainable";
    for (const Branch& b : perBranch)
        if (b.status != sdp::Status::Optimal) return "inaccurate";
    if (sEffective < s) return "clamped";
    return "ok";
}

double relaxationMaximum(const Functional& target, const Options& opts) {
    if (opts.mode == Mode::DI) {
        const auto* f = std::get_if<BellFunctional>(&target);
        require(f != nullptr, ErrorCode::Precondition, "DI mode needs a Bell functional");
        return maximum(setupDI(*f, opts), opts);
    }
    const auto* w = std::get_if<DimensionWitness>(&target);
    require(w != nullptr, ErrorCode::Precondition, "witness modes need a dimension witness");
    if (opts.mode == Mode::Theorem1) return maximum(setupThm1(*w, opts), opts);
    return maximum(setupThm2(*w, opts), opts);
}

Result certifyDI(const BellFunctional& f, double s, const Options& opts) {
    return run(setupDI(f, opts), Mode::DI, s, opts);
}

Result certifyThm1(const DimensionWitness& w, double s, const Options& opts) {
    const Setup st = setupThm1(w, opts);
    Result r = run(st, Mode::Theorem1, s, opts);
    if (!r.attainable) return r;
    // DI joint guess under the same constraints, minus log2 d.
    npa::MomentProblem mp = st.mp;
    npa::addWitnessValueConstraint(mp, st.functional, r.sEffective,
                                   opts.equality ? npa::Relation::Equal : npa::Relation::GreaterEqual);
    double joint = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < w.scenario.outcomes; ++b) {
            npa::setGuessingObjective(mp, npa::GuessMode::DI, a, b, opts.x0, opts.y0);
            const npa::MomentSolution sol = npa::solve(mp, opts.solver);
            require(acceptable(sol), ErrorCode::Solver,
                    "joint branch a=" + std::to_string(a) + ",b=" + std::to_string(b) + ": solver returned " +
                        sdp::statusName(sol.status) + " (gap " + std::to_string(sol.raw.relativeGap) +
                        ", primal residual " + std::to_string(sol.raw.primalResidual) + ", dual residual " +
                        std::to_string(sol.raw.dualResidual) + ")");
            joint = std::max(joint, sol.value);
        }
    joint = std::clamp(joint, std::numeric_limits<double>::min(), 1.0);
    r.minEntropyMinusLog2d = -std::log2(joint) - std::log2(static_cast<double>(opts.dim));
    return r;
}

Result certifyThm2(const DimensionWitness& w, double s, const Options& opts) {
    return run(setupThm2(w, opts), Mode::Theorem2, s, opts);
}

std::vector<double> uniformGrid(int steps) {
    require(steps >= 1, ErrorCode::Domain, "delta grid needs at least one point");
    if (steps == 1) return {1.0};
    std::vector<double> g(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) g[static_cast<std::size_t>(k)] = static_cast<double>(k) / (steps - 1);
    return g;
}

Result certifyMixed(const DimensionWitness& w, double s, const Options& opts, const std::vector<double>& deltaGrid) {
    require(theorem2Applicable(w), ErrorCode::Precondition,
            "mixed certification needs a binary zero-summing or outcome-antisymmetric witness");
    const std::vector<double> grid = deltaGrid.empty() ? uniformGrid(opts.deltaSteps) : deltaGrid;
    for (double d : grid) require(d >= 0.0 && d <= 1.0, ErrorCode::Domain, "delta grid points must lie in [0,1]");

    Options inner = opts;
    inner.mode = Mode::Theorem2;
    inner.jobs = 1;
    std::vector<DeltaPoint> points(grid.size());
    parallelFor(grid.size(), opts.jobs, [&](std::size_t i) { points[i] = deltaPoint(w, s, grid[i], inner); });

    std::size_t bestIdx = points.size();
    for (std::size_t i = 0; i < points.size(); ++i)
        if (bestIdx == points.size() ? points[i].attainable : betterDelta(points[i], points[bestIdx])) bestIdx = i;

    Result r;
    r.mode = Mode::Mixed;
    r.level = opts.level;
    r.s = s;
    r.sEffective = s;
    if (bestIdx == points.size()) {
        r.attainable = false;
        r.deltaGrid = points;
        r.notes.push_back("s unattainable at any delta");
        return r;
    }

    DeltaPoint best = points[bestIdx];
    if (opts.refineDelta && grid.size() > 2) {
        // Golden-section search on the neighbouring grid interval, three solves.
        std::vector<double> sorted = grid;
        std::sort(sorted.begin(), sorted.end());
        const auto pos = std::lower_bound(sorted.begin(), sorted.end(), best.delta) - sorted.begin();
        double lo = sorted[static_cast<std::size_t>(std::max<std::ptrdiff_t>(pos - 1, 0))];
        double hi = sorted[static_cast<std::size_t>(std::min<std::ptrdiff_t>(pos + 1, std::ssize(sorted) - 1))];
        const double invPhi = (std::sqrt(5.0) - 1.0) / 2.0;
        double c = hi - invPhi * (hi - lo);
        double d = lo + invPhi * (hi - lo);
        DeltaPoint pc = deltaPoint(w, s, c, inner);
        DeltaPoint pd = deltaPoint(w, s, d, inner);
        points.push_back(pc);
        points.push_back(pd);
        if (deltaCombined(pc) > deltaCombined(pd)) {
            hi = d;
            d = c;
            c = hi - invPhi * (hi - lo);
            points.push_back(deltaPoint(w, s, c, inner));
        } else {
            lo = c;
            c = d;
            d = lo + invPhi * (hi - lo);
            points.push_back(deltaPoint(w, s, d, inner));
        }
        for (std::size_t i = points.size() - 3; i < points.size(); ++i)
            if (betterDelta(points[i], best)) best = points[i];
        std::stable_sort(points.begin(), points.end(),
                         [](const DeltaPoint& a, const DeltaPoint& b) { return a.delta < b.delta; });
    }

    r.deltaGrid = points;
    r.bestDelta = best.delta;
    r.perBranch = best.branches;
    r.witnessMax = best.witnessMax;
    r.pGuessBound = std::min(1.0, best.combined);
    r.minEntropyBound = std::max(0.0, minEntropy(r.pGuessBound));
    return r;
}

Result certify(const Functional& target, double s, const Options& opts) {
    if (opts.mode == Mode::DI) {
        const auto* f = std::get_if<BellFunctional>(&target);
        require(f != nullptr, ErrorCode::Precondition, "DI mode needs a Bell functional");
        return certifyDI(*f, s, opts);
    }
    const auto* w = std::get_if<DimensionWitness>(&target);
    require(w != nullptr, ErrorCode::Precondition, "witness modes need a dimension witness");
    switch (opts.mode) {
        case Mode::Theorem1: return certifyThm1(*w, s, opts);
        case Mode::Theorem2: return certifyThm2(*w, s, opts);
        default: return certifyMixed(*w, s, opts);
    }
}

double valueAtFraction(double p, double sMax, double constant) { return constant + p * (sMax - constant); }

std::vector<double> linspace(double lo, double hi, int steps) {
    require(steps >= 1, ErrorCode::Domain, "sweep needs at least one point");
    if (steps == 1) return {hi};
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) v[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (steps - 1);
    return v;
}

namespace {
double constantOf(const Functional& f) {
    return std::visit([](const auto& g) { return g.constant; }, f);
}
}  // namespace

Sweep sweep(const Functional& target, double sMax, const std::vector<double>& ps, const Options& opts) {
    Sweep sw;
    sw.points.resize(ps.size());
    Options inner = opts;
    inner.jobs = 1;
    const double c = constantOf(target);
    parallelFor(ps.size(), opts.jobs, [&](std::size_t i) {
        sw.points[i] = {ps[i], certify(target, valueAtFraction(ps[i], sMax, c), inner)};
    });
    for (const SweepPoint& pt : sw.points)
        if (pt.result.minEntropyBound > 1e-6) {
            sw.criticalP = pt.p;
            break;
        }
    return sw;
}

std::optional<double> criticalP(const Functional& target, double sMax, double pLo, double pHi, const Options& opts,
                                double tol, double threshold) {
    const double c = constantOf(target);
    auto positive = [&](double p) {
        return certify(target, valueAtFraction(p, sMax, c), opts).minEntropyBound > threshold;
    };
    if (!positive(pHi)) return std::nullopt;
    if (positive(pLo)) return pLo;
    while (pHi - pLo > tol) {
        const double mid = 0.5 * (pLo + pHi);
        (positive(mid) ? pHi : pLo) = mid;
    }
    return pHi;
}

void writeCsvHeader(std::ostream& out) { out << "p,s,mode,level,branch_values,p_guess,h_min,best_delta,status\n"; }

void writeCsvRow(std::ostream& out, double p, const Result& r) {
    std::ostringstream branches;
    branches.precision(12);
    for (std::size_t i = 0; i < r.perBranch.size(); ++i) branches << (i ? ";" : "") << r.perBranch[i].value;
    std::ostringstream row;
    row.precision(12);
    row << p << ',' << r.s << ',' << modeName(r.mode) << ',' << npa::levelName(r.level) << ',' << branches.str() << ','
        << r.pGuessBound << ',' << r.minEntropyBound << ',';
    if (r.bestDelta) row << *r.bestDelta;
    row << ',' << r.status() << '\n';
    out << row.str();
}

void writeCsv(std::ostream& out, const Sweep& sw) {
    writeCsvHeader(out);
    for (const SweepPoint& pt : sw.points) writeCsvRow(out, pt.p, pt.result);
}

namespace {
nlohmann::json branchJson(const Branch& b) {
    nlohmann::json j{{"branch", b.label}, {"status", sdp::statusName(b.status)}, {"gap", b.gap},
                     {"iterations", b.iterations}};
    j["value"] = std::isfinite(b.value) ? nlohmann::json(b.value) : nlohmann::json(nullptr);
    return j;
}
}  // namespace

nlohmann::json toJson(const Result& r) {
    nlohmann::json j{{"mode", modeName(r.mode)},
                     {"level", npa::levelName(r.level)},
                     {"s", r.s},
                     {"sEffective", r.sEffective},
                     {"witnessMax", r.witnessMax},
                     {"attainable", r.attainable},
                     {"pGuessBound", r.pGuessBound},
                     {"minEntropyBound", r.minEntropyBound},
                     {"status", r.status()},
                     {"notes", r.notes}};
    j["perBranch"] = nlohmann::json::array();
    for (const Branch& b : r.perBranch) j["perBranch"].push_back(branchJson(b));
    if (r.minEntropyMinusLog2d) j["minEntropyMinusLog2d"] = *r.minEntropyMinusLog2d;
    if (!r.deltaGrid.empty()) {
        j["deltaGrid"] = nlohmann::json::array();
        for (const DeltaPoint& d : r.deltaGrid) {
            nlohmann::json dj{{"delta", d.delta},   {"attainable", d.attainable}, {"witnessMax", d.witnessMax},
                              {"pGuess", d.pGuess}, {"combined", d.combined}};
            dj["branches"] = nlohmann::json::array();
            for (const Branch& b : d.branches) dj["branches"].push_back(branchJson(b));
            j["deltaGrid"].push_back(dj);
        }
    }
    if (r.bestDelta) j["bestDelta"] = *r.bestDelta;
    return j;
}

nlohmann::json toJson(const Sweep& sw) {
    nlohmann::json j{{"points", nlohmann::json::array()}};
    for (const SweepPoint& pt : sw.points) {
        nlohmann::json pj = toJson(pt.result);
        pj["p"] = pt.p;
        j["points"].push_back(pj);
    }
    j["criticalP"] = sw.criticalP ? nlohmann::json(*sw.criticalP) : nlohmann::json(nullptr);
    return j;
}

}  // namespace dimwit::certify
