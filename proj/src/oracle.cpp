#include "dimwit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "dimwit/parallel.hpp"
#include "dimwit/quantum.hpp"
#include "dimwit/transforms.hpp"

namespace dimwit::oracle {

namespace {

constexpr double kTieTolerance = 1e-12;

std::uint64_t checkedPower(std::uint64_t base, int exponent, std::uint64_t limit) {
    std::uint64_t n = 1;
    for (int i = 0; i < exponent; ++i) {
        require(base == 0 || n <= limit / base, ErrorCode::Precondition,
                "enumeration exceeds " + std::to_string(limit) + " strategies");
        n *= base;
    }
    return n;
}

// Lexicographic enumeration of mixed-radix digit strings in parallel chunks.
// eval maps a digit vector to a value; reduction is in chunk order.
template <class Eval>
ClassicalBound enumerate(const std::vector<int>& radix, std::uint64_t total, int jobs, Eval&& eval) {
    const std::size_t chunks = static_cast<std::size_t>(std::max(1, jobs)) * 4;
    struct Partial {
        double value = -std::numeric_limits<double>::infinity();
        std::uint64_t count = 0;
    };
    std::vector<Partial> parts(chunks);
    parallelFor(chunks, jobs, [&](std::size_t c) {
        const std::uint64_t begin = total * c / chunks;
        const std::uint64_t end = total * (c + 1) / chunks;
        if (begin >= end) return;
        std::vector<int> digits(radix.size());
        std::uint64_t rest = begin;
        for (std::size_t k = radix.size(); k-- > 0;) {
            digits[k] = static_cast<int>(rest % static_cast<std::uint64_t>(radix[k]));
            rest /= static_cast<std::uint64_t>(radix[k]);
        }
        Partial local;
        for (std::uint64_t i = begin; i < end; ++i) {
            const double v = eval(digits);
            if (v > local.value + kTieTolerance) {
                local.value = v;
                local.count = 1;
            } else if (v >= local.value - kTieTolerance) {
                ++local.count;
            }
            for (std::size_t k = radix.size(); k-- > 0;) {
                if (++digits[k] < radix[k]) break;
                digits[k] = 0;
            }
        }
        parts[c] = local;
    });
    ClassicalBound out;
    out.value = -std::numeric_limits<double>::infinity();
    out.strategies = total;
    for (const auto& p : parts) {
        if (p.count == 0) continue;
        if (p.value > out.value + kTieTolerance) {
            out.value = p.value;
            out.maximizers = p.count;
        } else if (p.value >= out.value - kTieTolerance) {
            out.value = std::max(out.value, p.value);
            out.maximizers += p.count;
        }
    }
    return out;
}

}  // namespace

ClassicalBound classicalBound(const BellFunctional& f, int jobs) {
    f.validate();
    const DiScenario& sc = f.scenario;
    const std::uint64_t total = checkedPower(static_cast<std::uint64_t>(sc.outcomesA), sc.settingsX, kMaxStrategies) *
                                checkedPower(static_cast<std::uint64_t>(sc.outcomesB), sc.settingsY, kMaxStrategies);
    require(total <= kMaxStrategies, ErrorCode::Precondition, "classical enumeration exceeds the strategy budget");
    std::vector<int> radix;
    for (int x = 0; x < sc.settingsX; ++x) radix.push_back(sc.outcomesA);
    for (int y = 0; y < sc.settingsY; ++y) radix.push_back(sc.outcomesB);
    return enumerate(radix, total, jobs, [&](const std::vector<int>& d) {
        double v = f.constant;
        for (int x = 0; x < sc.settingsX; ++x)
            for (int y = 0; y < sc.settingsY; ++y) v += f.at(d[x], d[sc.settingsX + y], x, y);
        return v;
    });
}

ClassicalBound classicalWitnessBound(const DimensionWitness& w, int jobs, bool traceOne) {
    w.validate();
    const SdiScenario& sc = w.scenario;
    const std::uint64_t decoders = checkedPower(static_cast<std::uint64_t>(sc.outcomes), sc.dim, kMaxStrategies);
    const std::uint64_t total = checkedPower(static_cast<std::uint64_t>(sc.dim), sc.preparations, kMaxStrategies) *
                                checkedPower(decoders, sc.settings, kMaxStrategies);
    require(total <= kMaxStrategies, ErrorCode::Precondition, "classical enumeration exceeds the strategy budget");
    std::vector<int> radix;
    for (int x = 0; x < sc.preparations; ++x) radix.push_back(sc.dim);
    for (int y = 0; y < sc.settings; ++y)
        for (int m = 0; m < sc.dim; ++m) radix.push_back(sc.outcomes);
    require(!traceOne || sc.dim % sc.outcomes == 0, ErrorCode::Precondition,
            "trace-one decoders need dim divisible by the outcome count");
    const int share = sc.dim / sc.outcomes;
    return enumerate(radix, total, jobs, [&](const std::vector<int>& d) {
        if (traceOne) {
            for (int y = 0; y < sc.settings; ++y)
                for (int b = 0; b < sc.outcomes; ++b) {
                    const auto first = d.begin() + sc.preparations + y * sc.dim;
                    if (std::count(first, first + sc.dim, b) != share)
                        return -std::numeric_limits<double>::infinity();
                }
        }
        double v = w.constant;
        for (int x = 0; x < sc.preparations; ++x)
            for (int y = 0; y < sc.settings; ++y) v += w.at(d[sc.preparations + y * sc.dim + d[x]], x, y);
        return v;
    });
}

std::vector<Eigen::Vector3d> fibonacciSphere(int n) {
    require(n >= 1, ErrorCode::Domain, "sphere grid needs at least one point");
    std::vector<Eigen::Vector3d> pts;
    pts.reserve(static_cast<std::size_t>(n));
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = n == 1 ? 1.0 : 1.0 - 2.0 * (i + 0.5) / n;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double t = golden * i;
        pts.emplace_back(r * std::cos(t), r * std::sin(t), z);
    }
    return pts;
}

int pointsForResolution(double degrees) {
    require(degrees > 0.0 && degrees <= 90.0, ErrorCode::Domain, "grid resolution must be in (0, 90] degrees");
    const double t = degrees * std::numbers::pi / 180.0;
    return static_cast<int>(std::ceil(4.0 * std::numbers::pi / (t * t)));
}

GridMax gridWitnessMax(const DimensionWitness& w, double resolutionDegrees, int jobs, bool constantOutcomes) {
    w.validate();
    require(w.binary(), ErrorCode::Precondition, "grid search needs a binary witness");
    require(w.scenario.dim == 2, ErrorCode::Precondition, "grid search is restricted to qubits");
    const int nx = w.scenario.preparations;
    const int ny = w.scenario.settings;

    // W = C + sum_y offset_y + sum_xy gamma r_x.m_y for trace-one projective
    // settings; a constant-outcome setting contributes trivial_y instead.
    Eigen::MatrixXd gamma(nx, ny);
    std::vector<double> offset(static_cast<std::size_t>(ny), 0.0), trivial(static_cast<std::size_t>(ny), 0.0);
    for (int y = 0; y < ny; ++y) {
        double s0 = 0.0, s1 = 0.0;
        for (int x = 0; x < nx; ++x) {
            s0 += w.at(0, x, y);
            s1 += w.at(1, x, y);
            gamma(x, y) = 0.5 * (w.at(0, x, y) - w.at(1, x, y));
        }
        offset[y] = 0.5 * (s0 + s1);
        trivial[y] = std::max(s0, s1);
    }

    const int sphereN = pointsForResolution(resolutionDegrees);
    const auto sphere = fibonacciSphere(sphereN);
    const int meridianN = static_cast<int>(std::ceil(180.0 / resolutionDegrees)) + 1;
    std::vector<Eigen::Vector3d> meridian;
    for (int i = 0; i < meridianN; ++i) {
        const double t = std::numbers::pi * i / (meridianN - 1);
        meridian.emplace_back(std::sin(t), 0.0, std::cos(t));
    }

    // Settings 2.. range over the full sphere.
    std::uint64_t free = 1;
    const std::uint64_t outer = ny >= 2 ? static_cast<std::uint64_t>(meridianN) : 1;
    for (int y = 2; y < ny; ++y) {
        require(free <= kMaxGridEvaluations / outer / static_cast<std::uint64_t>(sphereN), ErrorCode::Precondition,
                "grid search exceeds the evaluation budget");
        free *= static_cast<std::uint64_t>(sphereN);
    }

    const int masks = 1 << ny;
    std::vector<double> best(outer, -std::numeric_limits<double>::infinity());
    parallelFor(outer, jobs, [&](std::size_t o) {
        std::vector<Eigen::Vector3d> m(static_cast<std::size_t>(ny));
        m[0] = Eigen::Vector3d::UnitZ();
        if (ny >= 2) m[1] = meridian[o];
        std::vector<int> idx(static_cast<std::size_t>(std::max(0, ny - 2)), 0);
        double local = -std::numeric_limits<double>::infinity();
        for (std::uint64_t k = 0; k < free; ++k) {
            for (int y = 2; y < ny; ++y) m[y] = sphere[idx[y - 2]];
            for (int mask = constantOutcomes ? 0 : masks - 1; mask < masks; ++mask) {  // bit set: setting uses its axis
                double v = w.constant;
                for (int y = 0; y < ny; ++y) v += (mask >> y & 1) ? offset[y] : trivial[y];
                for (int x = 0; x < nx; ++x) {
                    Eigen::Vector3d s = Eigen::Vector3d::Zero();
                    for (int y = 0; y < ny; ++y)
                        if (mask >> y & 1) s += gamma(x, y) * m[y];
                    v += s.norm();
                }
                local = std::max(local, v);
            }
            for (std::size_t j = idx.size(); j-- > 0;) {
                if (++idx[j] < sphereN) break;
                idx[j] = 0;
            }
        }
        best[o] = local;
    });
    GridMax g;
    g.value = *std::max_element(best.begin(), best.end());
    g.evaluations = outer * free;
    g.spherePoints = sphereN;
    return g;
}

InclusionReport verifyInclusion(const InclusionOptions& opts) {
    require(opts.samples >= 1, ErrorCode::Domain, "inclusion check needs at least one sample");
    require(opts.preparations >= 1 && opts.settings >= 1, ErrorCode::Domain, "empty scenario");
    const int nx = opts.preparations;
    const int ny = opts.settings;
    const DiScenario di{2, 2, nx, ny};

    std::vector<InclusionReport> rows(static_cast<std::size_t>(opts.samples));
    parallelFor(rows.size(), opts.jobs, [&](std::size_t i) {
        std::seed_seq seq{opts.seed, static_cast<std::uint64_t>(i)};
        std::mt19937_64 rng(seq);
        const QuantumRealization r = randomQubitRealization(nx, ny, rng, true, true);
        // Outcome-antisymmetric witness so that both theorems apply.
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        DimensionWitness w = DimensionWitness::zero(SdiScenario{2, nx, ny, 2}, u(rng));
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y) {
                w.at(0, x, y) = u(rng);
                w.at(1, x, y) = -w.at(0, x, y);
            }

        const SdiDistribution p = probabilities(r);
        const double wv = evaluateWitness(w, p);
        const DiDistribution lift = liftToDevice1(r);
        const DiDistribution sp = strategyPDistribution(r);
        InclusionReport& row = rows[i];
        for (int x = 0; x < nx; ++x)
            for (int y = 0; y < ny; ++y) {
                row.liftMarginal = std::max(row.liftMarginal, std::abs(lift.marginalA(0, x, y) - 0.5));
                for (int b = 0; b < 2; ++b) {
                    row.liftIdentity = std::max(row.liftIdentity, std::abs(p(b, x, y) - 2.0 * lift(0, b, x, y)));
                    for (int a = 0; a < 2; ++a)
                        row.negAnegB = std::max(row.negAnegB, std::abs(sp(a, b, x, y) - sp(1 - a, 1 - b, x, y)));
                }
            }
        row.theorem1Value = std::abs(evaluateBell(witnessToTheorem1Functional(w, 2).functional, lift) - wv);
        row.theorem2Value = std::abs(evaluateBell(witnessToTheorem2Functional(w).functional, sp) - wv);
        if (opts.checkNpa) {
            npa::MomentProblem mpP = npa::buildMomentProblem(di, opts.level);
            npa::addSymmetryConstraints(mpP);
            row.npaResidual = npa::feasibilityResidual(mpP, sp);
            npa::MomentProblem mpL = npa::buildMomentProblem(di, opts.level);
            npa::addTheorem1Marginals(mpL, 2);
            row.npaResidualLift = npa::feasibilityResidual(mpL, lift);
        }
    });

    InclusionReport out;
    out.samples = opts.samples;
    out.preparations = nx;
    out.settings = ny;
    out.level = opts.level;
    for (const auto& r : rows) {
        out.liftIdentity = std::max(out.liftIdentity, r.liftIdentity);
        out.liftMarginal = std::max(out.liftMarginal, r.liftMarginal);
        out.theorem1Value = std::max(out.theorem1Value, r.theorem1Value);
        out.negAnegB = std::max(out.negAnegB, r.negAnegB);
        out.theorem2Value = std::max(out.theorem2Value, r.theorem2Value);
        out.npaResidual = std::max(out.npaResidual, r.npaResidual);
        out.npaResidualLift = std::max(out.npaResidualLift, r.npaResidualLift);
    }
    return out;
}

nlohmann::json toJson(const ClassicalBound& b) {
    return {{"value", b.value}, {"maximizers", b.maximizers}, {"strategies", b.strategies}};
}

nlohmann::json toJson(const GridMax& g) {
    return {{"value", g.value}, {"evaluations", g.evaluations}, {"spherePoints", g.spherePoints}};
}

nlohmann::json toJson(const InclusionReport& r) {
    return {{"samples", r.samples},
            {"preparations", r.preparations},
            {"settings", r.settings},
            {"level", npa::levelName(r.level)},
            {"residuals",
             {{"liftIdentity", r.liftIdentity},
              {"liftMarginal", r.liftMarginal},
              {"theorem1Value", r.theorem1Value},
              {"negAnegB", r.negAnegB},
              {"theorem2Value", r.theorem2Value},
              {"npaStrategyP", r.npaResidual},
              {"npaLift", r.npaResidualLift}}}};
}

}  // namespace dimwit::oracle
